//! Verification suites and their reports.

use std::ops::RangeInclusive;

use cylquant::closed_forms::adjoint_relation_exact;
use cylquant::matrix::max_scaled_deviation;
use cylquant::{
    adjudicate_selection_rule, inverse_relation_check, op_A_q, op_A_star_p, op_A_star_p_A_q, orthonormality_defect,
    quantize, resolution_defect, verify_ordering, BasisWindow, Epsilon64, Laurent64, ObservableSpec, Operator64,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::observable::Observable;
use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Ordering,
    Resolution,
    Orthonormality,
    Adjoint,
    Inverse,
    Oracle,
}

/// How `value` is tested against `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    /// `value < tolerance`
    Below,
    /// `value > tolerance`
    Above,
    /// `value == tolerance`
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub epsilon: f64,
    pub n_max: usize,
    pub value: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, eps: Epsilon64, window: BasisWindow, value: f64, tolerance: f64, comparison: Comparison) -> Self {
        let pass = match comparison {
            Comparison::Below => value < tolerance,
            Comparison::Above => value > tolerance,
            Comparison::Equal => value == tolerance,
        };
        Self { name: name.into(), epsilon: eps.value(), n_max: window.n_max(), value, tolerance, comparison, pass }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("name,epsilon,n_max,value,tolerance,comparison,pass\n");
        for c in &self.checks {
            let cmp = match c.comparison {
                Comparison::Below => "below",
                Comparison::Above => "above",
                Comparison::Equal => "equal",
            };
            s.push_str(&format!("{},{:?},{},{:?},{:?},{cmp},{}\n", c.name, c.epsilon, c.n_max, c.value, c.tolerance, c.pass));
        }
        s
    }
}

pub struct VerifyOptions {
    pub p_range: RangeInclusive<i64>,
    pub q_range: RangeInclusive<i64>,
    pub obs: Option<Observable>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { p_range: -3..=3, q_range: -3..=3, obs: None }
    }
}

/// Parses `a..b` (inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let bad = || format!("expected `a..b` or an integer, got `{s}`");
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim_start_matches('=').trim().parse().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok(lo..=hi)
}

pub fn run(suite: Suite, cfg: &RunConfig, opts: &VerifyOptions) -> Result<Report, CliError> {
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    for eps in cfg.epsilons() {
        let window = cfg.window(eps)?;
        match suite {
            Suite::Ordering => ordering(eps, window, opts, &mut checks, &mut notes)?,
            Suite::Resolution => resolution(eps, window, cfg, &mut checks, &mut notes)?,
            Suite::Orthonormality => orthonormality(eps, window, cfg, &mut checks, &mut notes)?,
            Suite::Adjoint => adjoint(eps, window, opts, &mut checks)?,
            Suite::Inverse => checks.push(Check::new(
                "inverse A^-1 A = Id (interior)",
                eps,
                window,
                inverse_relation_check(eps, window)?,
                tolerances::INVERSE,
                Comparison::Below,
            )),
            Suite::Oracle => oracle(eps, window, cfg, opts, &mut checks, &mut notes)?,
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    notes.retain(|n| seen.insert(n.clone()));
    let passed = checks.iter().filter(|c| c.pass).count();
    let failed = checks.len() - passed;
    Ok(Report { suite, config: cfg.clone(), checks, notes, passed, failed, pass: failed == 0 })
}

fn ordering(
    eps: Epsilon64,
    window: BasisWindow,
    opts: &VerifyOptions,
    checks: &mut Vec<Check>,
    notes: &mut Vec<String>,
) -> Result<(), CliError> {
    for p in opts.p_range.clone() {
        for q in opts.q_range.clone() {
            let r = verify_ordering(p, q, eps, window)?;
            checks.push(Check::new(
                format!("ordering p={p} q={q} interior"),
                eps,
                window,
                r.interior_defect,
                tolerances::ORDERING,
                Comparison::Below,
            ));
        }
    }
    notes.push(
        "ordering defects are scaled entrywise by max(1, |reference|) and taken over rows and columns at least \
         max(|p|, |q|, |p-q|) away from the window edge"
            .into(),
    );
    Ok(())
}

fn resolution(
    eps: Epsilon64,
    window: BasisWindow,
    cfg: &RunConfig,
    checks: &mut Vec<Check>,
    notes: &mut Vec<String>,
) -> Result<(), CliError> {
    let quad = cfg.quadrature(window, 0)?;
    let res = resolution_defect(eps, window, &quad)?;
    let gram = orthonormality_defect(window, eps, &quad)?;
    checks.push(Check::new("resolution of identity", eps, window, res.defect, tolerances::RESOLUTION, Comparison::Below));
    checks.push(Check::new("gram matrix", eps, window, gram.defect, tolerances::RESOLUTION, Comparison::Below));
    let between = max_scaled_deviation(&res.matrix, &gram.matrix, |_, _| true)?;
    checks.push(Check::new(
        "resolution vs gram",
        eps,
        window,
        between,
        tolerances::RESOLUTION_VS_GRAM,
        Comparison::Below,
    ));
    if res.aliased {
        notes.push(format!(
            "beta grid of {} points is below the {} required at n_max={}: aliasing",
            quad.beta_points,
            res.required_beta_points,
            window.n_max()
        ));
    }
    Ok(())
}

fn orthonormality(
    eps: Epsilon64,
    window: BasisWindow,
    cfg: &RunConfig,
    checks: &mut Vec<Check>,
    notes: &mut Vec<String>,
) -> Result<(), CliError> {
    let quad = cfg.quadrature(window, 0)?;
    let gram = orthonormality_defect(window, eps, &quad)?;
    checks.push(Check::new("gram matrix", eps, window, gram.defect, tolerances::RESOLUTION, Comparison::Below));
    if gram.aliased {
        notes.push(format!(
            "beta grid of {} points is below the {} required at n_max={}: aliasing",
            quad.beta_points,
            gram.required_beta_points,
            window.n_max()
        ));
    }
    if window.n_max() >= 1 {
        let mut probe = quad;
        probe.beta_points = 2;
        let r = orthonormality_defect(window, eps, &probe)?;
        checks.push(Check::new(
            "aliasing probe (2 beta points) flagged",
            eps,
            window,
            if r.aliased { 1.0 } else { 0.0 },
            1.0,
            Comparison::Equal,
        ));
        checks.push(Check::new(
            "aliasing probe (2 beta points) gram defect",
            eps,
            window,
            r.defect,
            tolerances::RESOLUTION,
            Comparison::Above,
        ));
    }
    Ok(())
}

fn adjoint(eps: Epsilon64, window: BasisWindow, opts: &VerifyOptions, checks: &mut Vec<Check>) -> Result<(), CliError> {
    let lo = *opts.p_range.start().min(opts.q_range.start());
    let hi = *opts.p_range.end().max(opts.q_range.end());
    for p in lo..=hi {
        let exact = adjoint_relation_exact(p, eps, window)?;
        let diff = op_A_star_p(p, eps, window)?.try_sub(&op_A_q(p, eps, window)?.adjoint())?.max_abs();
        checks.push(Check::new(format!("adjoint A*^{p} = (A^{p})^+ bitwise"), eps, window, if exact { 1.0 } else { 0.0 }, 1.0, Comparison::Equal));
        checks.push(Check::new(format!("adjoint A*^{p} - (A^{p})^+ max entry"), eps, window, diff, 0.0, Comparison::Equal));
    }
    Ok(())
}

fn oracle_check(
    name: String,
    closed: &Operator64,
    spec: &ObservableSpec<f64>,
    eps: Epsilon64,
    window: BasisWindow,
    cfg: &RunConfig,
) -> Result<Check, CliError> {
    let quad = cfg.quadrature(window, spec.bandwidth())?;
    let quadrature = quantize(spec, eps, window, &quad)?;
    let defect = max_scaled_deviation(closed, &quadrature, |_, _| true)?;
    Ok(Check::new(name, eps, window, defect, tolerances::ORACLE, Comparison::Below))
}

fn oracle(
    eps: Epsilon64,
    window: BasisWindow,
    cfg: &RunConfig,
    opts: &VerifyOptions,
    checks: &mut Vec<Check>,
    notes: &mut Vec<String>,
) -> Result<(), CliError> {
    if let Some(obs) = &opts.obs {
        let closed = obs
            .closed_form(eps, window)?
            .ok_or_else(|| CliError::Config(format!("`{obs}` has no closed form to compare with")))?;
        let spec = obs.oracle_spec(window);
        checks.push(oracle_check(format!("oracle {obs}"), &closed, &spec, eps, window, cfg)?);
        return Ok(());
    }

    for m in 0..=4u32 {
        let obs = Observable::JPower(m);
        let closed = obs.closed_form(eps, window)?.expect("J^m has a closed form");
        checks.push(oracle_check(format!("oracle {obs}"), &closed, &obs.oracle_spec(window), eps, window, cfg)?);
    }
    let beta = Observable::Beta;
    let closed = beta.closed_form(eps, window)?.expect("beta has a closed form");
    checks.push(oracle_check("oracle beta (Fourier route)".into(), &closed, &beta.oracle_spec(window), eps, window, cfg)?);

    let one = cylquant::Complex64::new(1.0, 0.0);
    for p in opts.p_range.clone() {
        let spec = ObservableSpec::Laurent(Laurent64::monomial(p, 0, one));
        checks.push(oracle_check(format!("oracle A*^{p}"), &op_A_star_p(p, eps, window)?, &spec, eps, window, cfg)?);
    }
    for q in opts.q_range.clone() {
        let spec = ObservableSpec::Laurent(Laurent64::monomial(0, q, one));
        checks.push(oracle_check(format!("oracle A^{q}"), &op_A_q(q, eps, window)?, &spec, eps, window, cfg)?);
    }
    for p in opts.p_range.clone() {
        for q in opts.q_range.clone() {
            let spec = ObservableSpec::Laurent(Laurent64::monomial(p, q, one));
            let closed = op_A_star_p_A_q(p, q, eps, window)?;
            checks.push(oracle_check(format!("oracle A*^{p} A^{q}"), &closed, &spec, eps, window, cfg)?);
        }
    }

    for p in opts.p_range.clone() {
        for q in opts.q_range.clone() {
            let quad = cfg.quadrature(window, p.unsigned_abs() + q.unsigned_abs())?;
            let r = adjudicate_selection_rule(p, q, eps, window, &quad)?;
            checks.push(Check::new(
                format!("selection p={p} q={q}: pointwise oracle on band q-p"),
                eps,
                window,
                r.q_minus_p_defect.max(r.off_band_max),
                tolerances::SELECTION_BAND,
                Comparison::Below,
            ));
            if let Some(d) = r.p_plus_q_defect {
                checks.push(Check::new(
                    format!("selection p={p} q={q}: p+q rule mismatch"),
                    eps,
                    window,
                    d,
                    tolerances::SELECTION_REFUTED,
                    Comparison::Above,
                ));
            }
        }
    }
    notes.push(
        "selection rule: quadrature of (A*)^p A^q populates only the band m-n = q-p, with the closed-form weights; \
         the p+q = m-n rule is contradicted for every p != 0 tested (for p = 0 the two rules coincide)"
            .into(),
    );
    notes.push("oracle defects are scaled entrywise by max(1, |quadrature value|)".into());
    Ok(())
}

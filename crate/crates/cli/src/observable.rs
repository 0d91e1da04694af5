//! Observable descriptions accepted on the command line.
//!
//! ```text
//! 1 | identity
//! J | J^m
//! beta | β
//! exp(<a>J) | exp(<a>J)cos(<k>beta)
//! laurent:(p,q,re,im)(p,q,re,im)...
//! ```

use std::fmt;

use cylquant::closed_forms::{laurent_entry, op_J_power, op_beta};
use cylquant::{eval_laurent, BasisWindow, Complex64, Epsilon64, Laurent64, Observable64, ObservableSpec, Operator64, PhasePoint};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Observable {
    JPower(u32),
    Beta,
    ExpCos { rate: f64, k: i64 },
    Laurent(Laurent64),
}

impl Observable {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || CliError::Config(format!("cannot parse observable `{text}`"));
        if s == "1" || s == "identity" {
            return Ok(Self::Laurent(Laurent64::monomial(0, 0, Complex64::new(1.0, 0.0))));
        }
        if s == "J" {
            return Ok(Self::JPower(1));
        }
        if let Some(m) = s.strip_prefix("J^") {
            return m.parse().map(Self::JPower).map_err(|_| bad());
        }
        if s == "beta" || s == "β" {
            return Ok(Self::Beta);
        }
        if let Some(rest) = s.strip_prefix("exp(") {
            let (rate, tail) = rest.split_once("J)").ok_or_else(bad)?;
            let rate: f64 = parse_coefficient(rate.trim_end_matches('*')).ok_or_else(bad)?;
            if tail.is_empty() {
                return Ok(Self::ExpCos { rate, k: 0 });
            }
            let inner = tail
                .strip_prefix("cos(")
                .and_then(|t| t.strip_suffix("beta)").or_else(|| t.strip_suffix("β)")))
                .ok_or_else(bad)?;
            let k = match inner.trim_end_matches('*') {
                "" => 1,
                "-" => -1,
                v => v.parse().map_err(|_| bad())?,
            };
            return Ok(Self::ExpCos { rate, k });
        }
        if let Some(body) = s.strip_prefix("laurent:") {
            return parse_laurent(body).map(Self::Laurent).ok_or_else(bad);
        }
        Err(bad())
    }

    /// The analytic matrix, when one exists. Laurent polynomials use the
    /// entry formula directly, so edge rows carry no truncation loss.
    pub fn closed_form(&self, eps: Epsilon64, window: BasisWindow) -> Result<Option<Operator64>, CliError> {
        Ok(match self {
            Self::JPower(m) => Some(op_J_power(*m, eps, window)?),
            Self::Beta => Some(op_beta(eps, window)),
            Self::Laurent(c) => Some(Operator64::try_from_fn(window, eps, |m, n| laurent_entry(c, m, n, eps))?),
            Self::ExpCos { .. } => None,
        })
    }

    /// Input to the quadrature oracle. The sawtooth is represented through its
    /// Fourier modes up to the largest band of the window.
    pub fn oracle_spec(&self, window: BasisWindow) -> Observable64 {
        match self {
            Self::JPower(m) => ObservableSpec::j_power(*m),
            Self::Beta => ObservableSpec::sawtooth(2 * window.n_max() as u64),
            Self::ExpCos { rate, k } => ObservableSpec::exp_cos(*rate, *k),
            Self::Laurent(c) => ObservableSpec::Laurent(c.clone()),
        }
    }

    /// Value of the classical function at `(beta, J)`.
    pub fn classical(&self, beta: f64, j: f64, eps: Epsilon64) -> Result<Complex64, CliError> {
        let x = PhasePoint::new(beta, j)?;
        Ok(match self {
            Self::JPower(m) => Complex64::new(j.powi(*m as i32), 0.0),
            Self::Beta => Complex64::new(x.beta(), 0.0),
            Self::ExpCos { rate, k } => Complex64::new((rate * j).exp() * (*k as f64 * beta).cos(), 0.0),
            Self::Laurent(c) => eval_laurent(c, &x, eps)?,
        })
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::JPower(m) => write!(f, "J^{m}"),
            Self::Beta => f.write_str("beta"),
            Self::ExpCos { rate, k } => write!(f, "exp({rate}J)cos({k}beta)"),
            Self::Laurent(c) => {
                f.write_str("laurent:")?;
                for ((p, q), v) in c.iter() {
                    write!(f, "({p},{q},{},{})", v.re, v.im)?;
                }
                Ok(())
            }
        }
    }
}

fn parse_coefficient(s: &str) -> Option<f64> {
    match s {
        "" => Some(1.0),
        "-" => Some(-1.0),
        v => v.parse().ok(),
    }
}

fn parse_laurent(body: &str) -> Option<Laurent64> {
    let mut out = Laurent64::new();
    let mut rest = body;
    let mut any = false;
    while let Some(start) = rest.find('(') {
        if !rest[..start].chars().all(|c| c == ';' || c == ',') {
            return None;
        }
        let end = rest[start..].find(')')? + start;
        let fields: Vec<&str> = rest[start + 1..end].split(',').collect();
        let [p, q, re, im] = fields.as_slice() else { return None };
        out.insert(p.parse().ok()?, q.parse().ok()?, Complex64::new(re.parse().ok()?, im.parse().ok()?));
        any = true;
        rest = &rest[end + 1..];
    }
    (any && rest.chars().all(|c| c == ';' || c == ',')).then_some(out)
}

//! Analytic operator matrices, the Laurent quantizer with `A*` factors on the
//! left, and checks of the ordering, adjoint and inverse relations.
//!
//! Shift operators are exact on the infinite basis; on a window they lose the
//! entries whose partner index falls outside. Products are therefore compared
//! only on an interior sub-window, and the remainder is reported separately.
//!
//! Every exponent of the form `(eps/2)·k` is built from an exact integer `k`
//! before a single call to `exp`, so relations that hold entrywise in exact
//! arithmetic hold bit-for-bit here.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::{max_scaled_deviation, one, zero, OperatorMatrix};
use crate::phase_space::{checked_exp, BasisWindow, Epsilon, LaurentCoefficients};
use crate::quadrature::QuadratureConfig;
use crate::quantizer::{quantize, ObservableSpec, PointwiseObservable};
use crate::scalar::Real;

fn exp_half_eps<T: Real>(eps: Epsilon<T>, k: i64) -> Result<T> {
    checked_exp(eps.value() * T::from_int(k) / T::lit(2.0), "closed-form operator")
}

/// Number of rows of a `shift`-band operator whose partner column leaves the
/// window.
pub fn dropped_entries(window: BasisWindow, shift: i64) -> usize {
    (shift.unsigned_abs() as usize).min(window.size())
}

/// `O_{J^m}`: diagonal `(i/(2√eps))^m H_m(-i √eps n)`.
///
/// `H_m` runs through the three-term recurrence in complex arithmetic; any
/// imaginary residue left in the product signals a recurrence bug and is an
/// error.
#[allow(non_snake_case)]
pub fn op_J_power<T: Real>(m: u32, eps: Epsilon<T>, window: BasisWindow) -> Result<OperatorMatrix<T>> {
    let root_e = eps.value().sqrt();
    let two = T::lit(2.0);
    let base = Complex::new(T::zero(), T::one() / (two * root_e));
    let prefactor = (0..m).fold(one::<T>(), |acc, _| acc * base);
    let mut out = OperatorMatrix::zeros(window, eps);
    for n in window.indices() {
        let z = Complex::new(T::zero(), -root_e * T::from_int(n));
        let mut prev = zero::<T>();
        let mut cur = one::<T>();
        for k in 0..m {
            let next = z * cur * two - prev * (two * T::from_int(k as i64));
            prev = cur;
            cur = next;
        }
        let v = prefactor * cur;
        if v.im.abs() > T::lit(T::ROUND_OFF) * v.re.abs().max(T::one()) {
            return Err(Error::ImaginaryResidue { n, residue: v.im.as_f64() });
        }
        out.set(n, n, Complex::new(v.re, T::zero()));
    }
    Ok(out)
}

/// `O_β = π Id + i Σ_{n≠n'} e^{-eps (n-n')²/4} / (n - n') |n><n'|`.
pub fn op_beta<T: Real>(eps: Epsilon<T>, window: BasisWindow) -> OperatorMatrix<T> {
    let e = eps.value();
    OperatorMatrix::from_fn(window, eps, |m, n| {
        if m == n {
            Complex::new(T::PI(), T::zero())
        } else {
            let d = m - n;
            let mag = (-e * T::from_int(d * d) / T::lit(4.0)).exp() / T::from_int(d);
            Complex::new(T::zero(), mag)
        }
    })
}

/// `O_{A*^p} = Σ_n e^{(eps/2) p (p + 2n)} |n><n+p|`.
#[allow(non_snake_case)]
pub fn op_A_star_p<T: Real>(p: i64, eps: Epsilon<T>, window: BasisWindow) -> Result<OperatorMatrix<T>> {
    let mut out = OperatorMatrix::zeros(window, eps);
    for n in window.indices() {
        if window.contains(n + p) {
            out.set(n, n + p, Complex::new(exp_half_eps(eps, p * (p + 2 * n))?, T::zero()));
        }
    }
    Ok(out)
}

/// `O_{A^q} = Σ_n e^{-(eps/2) q (q - 2n)} |n><n-q|`.
#[allow(non_snake_case)]
pub fn op_A_q<T: Real>(q: i64, eps: Epsilon<T>, window: BasisWindow) -> Result<OperatorMatrix<T>> {
    let mut out = OperatorMatrix::zeros(window, eps);
    for n in window.indices() {
        if window.contains(n - q) {
            out.set(n, n - q, Complex::new(exp_half_eps(eps, -q * (q - 2 * n))?, T::zero()));
        }
    }
    Ok(out)
}

/// `O_{A*^p A^q} = Σ_n e^{(eps/2)(2pq - (p+q)(q-p-2n))} |n><n-(q-p)|`.
#[allow(non_snake_case)]
pub fn op_A_star_p_A_q<T: Real>(p: i64, q: i64, eps: Epsilon<T>, window: BasisWindow) -> Result<OperatorMatrix<T>> {
    let shift = q - p;
    let mut out = OperatorMatrix::zeros(window, eps);
    for n in window.indices() {
        if window.contains(n - shift) {
            let k = 2 * p * q - (p + q) * (q - p - 2 * n);
            out.set(n, n - shift, Complex::new(exp_half_eps(eps, k)?, T::zero()));
        }
    }
    Ok(out)
}

/// Result of comparing `O_{A*^p} O_{A^q}` with `O_{A*^p A^q}`.
///
/// Defects are scaled entrywise by `max(1, |reference|)` so they measure
/// round-off even where entries grow like `e^{eps n (p+q)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingReport<T> {
    pub p: i64,
    pub q: i64,
    pub eps: Epsilon<T>,
    pub window: BasisWindow,
    pub interior_defect: T,
    pub edge_defect: T,
    pub interior_margin: usize,
}

/// `max(|p|, |q|, |p - q|)`: distance from the edge beyond which shift
/// products are unaffected by truncation.
pub fn interior_margin(p: i64, q: i64) -> usize {
    p.unsigned_abs().max(q.unsigned_abs()).max((p - q).unsigned_abs()) as usize
}

fn in_interior(window: BasisWindow, margin: usize) -> impl Fn(i64) -> bool {
    let limit = window.n_max() as i64 - margin as i64;
    move |i| i.abs() <= limit
}

pub fn verify_ordering<T: Real>(p: i64, q: i64, eps: Epsilon<T>, window: BasisWindow) -> Result<OrderingReport<T>> {
    let margin = interior_margin(p, q);
    if window.n_max() <= margin {
        return Err(Error::WindowTooSmall { n_max: window.n_max(), required: margin });
    }
    let product = op_A_star_p(p, eps, window)?.matmul(&op_A_q(q, eps, window)?)?;
    let reference = op_A_star_p_A_q(p, q, eps, window)?;
    let inside = in_interior(window, margin);
    let interior_defect = max_scaled_deviation(&product, &reference, |m, n| inside(m) && inside(n))?;
    let edge_defect = max_scaled_deviation(&product, &reference, |m, n| !(inside(m) && inside(n)))?;
    Ok(OrderingReport { p, q, eps, window, interior_defect, edge_defect, interior_margin: margin })
}

/// `Σ c_{pq} O_{A*^p} O_{A^q}`, products formed on the full window.
pub fn quantize_laurent<T: Real>(
    c: &LaurentCoefficients<T>,
    eps: Epsilon<T>,
    window: BasisWindow,
) -> Result<OperatorMatrix<T>> {
    let mut acc = OperatorMatrix::zeros(window, eps);
    for ((p, q), coeff) in c.iter() {
        let term = op_A_star_p(p, eps, window)?.matmul(&op_A_q(q, eps, window)?)?;
        acc = acc.try_add(&term.scale(coeff))?;
    }
    Ok(acc)
}

/// Rows and columns of `window` at least `margin` away from the edge.
pub fn interior_of(window: BasisWindow, margin: usize) -> impl Fn(i64, i64) -> bool {
    let inside = in_interior(window, margin);
    move |m, n| inside(m) && inside(n)
}

/// Interior defect of `O_{A^{-1}} O_A - Id` and `O_A O_{A^{-1}} - Id`.
pub fn inverse_relation_check<T: Real>(eps: Epsilon<T>, window: BasisWindow) -> Result<T> {
    if window.n_max() < 2 {
        return Err(Error::WindowTooSmall { n_max: window.n_max(), required: 1 });
    }
    let a = op_A_q(1, eps, window)?;
    let a_inv = op_A_q(-1, eps, window)?;
    let id = OperatorMatrix::identity(window, eps);
    let keep = interior_of(window, 1);
    let left = max_scaled_deviation(&a_inv.matmul(&a)?, &id, &keep)?;
    let right = max_scaled_deviation(&a.matmul(&a_inv)?, &id, &keep)?;
    Ok(left.max(right))
}

/// True when `op_A_star_p(p)` equals `op_A_q(p)†` bit-for-bit.
pub fn adjoint_relation_exact<T: Real>(p: i64, eps: Epsilon<T>, window: BasisWindow) -> Result<bool> {
    Ok(op_A_star_p(p, eps, window)? == op_A_q(p, eps, window)?.adjoint())
}

/// `<m|O_f|n>` for `f = Σ c_{pq} (A*)^p A^q` straight from the entry formula:
/// only terms with `q - p = m - n` contribute, each with weight
/// `e^{(eps/2)(2pq - (p+q)(q-p-2m))}`. No window, so no truncation.
pub fn laurent_entry<T: Real>(c: &LaurentCoefficients<T>, m: i64, n: i64, eps: Epsilon<T>) -> Result<Complex<T>> {
    let mut acc = zero::<T>();
    for ((p, q), coeff) in c.iter() {
        if q - p == m - n {
            acc += coeff * exp_half_eps(eps, 2 * p * q - (p + q) * (q - p - 2 * m))?;
        }
    }
    Ok(acc)
}

/// The alternative entry rule with selection `p + q = m - n` and weight
/// `e^{(eps/2)(p(p - 2m) + q(2n + q))}`. Kept only so the quadrature oracle can
/// test it against the `q - p` rule.
pub fn printed_selection_entry<T: Real>(p: i64, q: i64, m: i64, n: i64, eps: Epsilon<T>) -> Result<Complex<T>> {
    if p + q != m - n {
        return Ok(zero());
    }
    Ok(Complex::new(exp_half_eps(eps, p * (p - 2 * m) + q * (2 * n + q))?, T::zero()))
}

/// Which band of `O_{A*^p A^q}` the quadrature oracle actually populates.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionRuleReport<T> {
    pub p: i64,
    pub q: i64,
    /// Scaled deviation of the oracle from `op_A_star_p_A_q` on band `q - p`.
    pub q_minus_p_defect: T,
    /// Largest oracle entry off band `q - p` (relative to the band scale).
    pub off_band_max: T,
    /// Relative deviation `|oracle - rule| / |rule|` on band `p + q` for the
    /// `p + q` rule (1 means the oracle has nothing there); `None` when the two rules name the same band (`p = 0`).
    pub p_plus_q_defect: Option<T>,
}

impl<T: Real> SelectionRuleReport<T> {
    /// The oracle agrees with the `q - p` rule to `tol`.
    pub fn supports_q_minus_p(&self, tol: T) -> bool {
        self.q_minus_p_defect < tol && self.off_band_max < tol
    }

    /// The oracle contradicts the `p + q` rule beyond `tol`.
    pub fn refutes_p_plus_q(&self, tol: T) -> bool {
        self.p_plus_q_defect.is_some_and(|d| d > tol)
    }
}

/// Quantizes `(A*)^p A^q` as a pointwise observable, with a β-bandwidth wide
/// enough to expose both candidate bands (`|p| + |q|`), and compares the
/// populated band with each selection rule.
pub fn adjudicate_selection_rule<T: Real>(
    p: i64,
    q: i64,
    eps: Epsilon<T>,
    window: BasisWindow,
    quad: &QuadratureConfig<T>,
) -> Result<SelectionRuleReport<T>> {
    let e = eps.value();
    let degree = T::from_int(p + q);
    let f = PointwiseObservable::new(p.unsigned_abs() + q.unsigned_abs(), e * degree.abs(), move |beta: T, j: T| {
        let phase = T::from_int(q - p) * beta;
        Complex::new(phase.cos(), phase.sin()) * (e * degree * j).exp()
    });
    let oracle = quantize(&ObservableSpec::Pointwise(f), eps, window, quad)?;
    let closed = op_A_star_p_A_q(p, q, eps, window)?;

    let band = q - p;
    let band_scale = closed.band(band).iter().map(|(_, _, v)| v.norm()).fold(T::one(), T::max);
    let q_minus_p_defect = max_scaled_deviation(&oracle, &closed, |m, n| m - n == band)?;
    let off_band_max = oracle
        .iter_entries()
        .filter(|(m, n, _)| m - n != band)
        .map(|(_, _, v)| v.norm())
        .fold(T::zero(), T::max)
        / band_scale;

    let p_plus_q_defect = if p + q == band {
        None
    } else {
        let mut worst = T::zero();
        for (m, n, v) in oracle.band(p + q) {
            let printed = printed_selection_entry(p, q, m, n, eps)?;
            worst = worst.max((v - printed).norm() / printed.norm());
        }
        Some(worst)
    };
    Ok(SelectionRuleReport { p, q, q_minus_p_defect, off_band_max, p_plus_q_defect })
}

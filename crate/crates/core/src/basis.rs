//! The Gaussian-weighted Fourier family `Φ_n(β, J) = e^{-eps n²/2} e^{n(eps J + iβ)}`,
//! its normalization series and truncation-window selection.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::{one, zero, OperatorMatrix};
use crate::phase_space::{checked_exp, unit_phase, BasisWindow, Epsilon, PhasePoint};
use crate::quadrature::{gauss_hermite_rule, QuadratureConfig};
use crate::scalar::Real;

/// `Φ_n^eps(x)`.
pub fn phi<T: Real>(n: i64, x: &PhasePoint<T>, eps: Epsilon<T>) -> Result<Complex<T>> {
    let nf = T::from_int(n);
    let e = eps.value();
    let modulus = checked_exp(nf * e * x.j() - e * nf * nf / T::lit(2.0), "basis function")?;
    Ok(unit_phase(n, x.beta()) * modulus)
}

/// `|Φ_n(x)|² = e^{-eps n² + 2 eps n J}`.
pub fn phi_abs_sq<T: Real>(n: i64, j: T, eps: Epsilon<T>) -> Result<T> {
    let nf = T::from_int(n);
    let e = eps.value();
    checked_exp(-e * nf * nf + T::lit(2.0) * e * nf * j, "basis modulus")
}

/// The truncated value of `N_eps(J) = Σ_n e^{-eps n² + 2 eps n J}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationResult<T> {
    pub value: T,
    /// `ln N_eps(J)`, finite even when `value` would be large.
    pub log_value: T,
    pub terms_used: usize,
    /// Bound on the neglected terms relative to `value`.
    pub tail_bound: T,
}

const MAX_SERIES_TERMS: usize = 1_000_000;

/// Sums the normalization series outward from its peak `n = round(J)`.
///
/// Each summand is `e^{eps J²} e^{-eps (n - J)²}`; the common factor is kept
/// aside so the partial sums stay O(1). The remainder beyond distance `d` from
/// `J` on either side is majorized by `e^{-eps d²} / (1 - e^{-2 eps d})`.
pub fn normalization<T: Real>(j: T, eps: Epsilon<T>, tol: T) -> Result<NormalizationResult<T>> {
    if !(tol.is_finite() && tol > T::zero()) {
        return Err(Error::InvalidTolerance { value: tol.as_f64(), constraint: "tol > 0" });
    }
    if !j.is_finite() {
        return Err(Error::NonFinite { what: "J", value: j.as_f64() });
    }
    let e = eps.value();
    let gauss = |n: i64| {
        let d = T::from_int(n) - j;
        (-e * d * d).exp()
    };
    let majorant = |d: T| {
        let r = (-T::lit(2.0) * e * d).exp();
        (-e * d * d).exp() / (T::one() - r)
    };

    let peak = j.round().to_i64().ok_or(Error::NonFinite { what: "J", value: j.as_f64() })?;
    let (mut lo, mut hi) = (peak, peak);
    let mut sum = gauss(peak);
    let mut terms = 1usize;
    let tail = loop {
        let right = majorant(T::from_int(hi + 1) - j);
        let left = majorant(j - T::from_int(lo - 1));
        let tail = (left + right) / sum;
        if tail < tol || tail == T::zero() {
            break tail;
        }
        if terms >= MAX_SERIES_TERMS {
            return Err(Error::Convergence("normalization series"));
        }
        hi += 1;
        lo -= 1;
        sum += gauss(hi) + gauss(lo);
        terms += 2;
    };
    let log_value = e * j * j + sum.ln();
    let value = checked_exp(log_value, "normalization factor")?;
    Ok(NormalizationResult { value, log_value, terms_used: terms, tail_bound: tail })
}

/// Smallest `N` such that `e^{-eps n²/2 + eps |n| J_max} < tol` for every `|n| > N`.
pub fn choose_window<T: Real>(eps: Epsilon<T>, j_max: T, tol: T) -> Result<BasisWindow> {
    if !(tol > T::zero() && tol < T::one()) {
        return Err(Error::InvalidTolerance { value: tol.as_f64(), constraint: "0 < tol < 1" });
    }
    if !(j_max.is_finite() && j_max > T::zero()) {
        return Err(Error::InvalidArgument(format!("J_max must be positive, got {j_max}")));
    }
    let e = eps.value();
    let log_tol = tol.ln();
    let log_coeff = |n: i64| {
        let nf = T::from_int(n);
        -e * nf * nf / T::lit(2.0) + e * nf * j_max
    };
    // log_coeff is concave with its larger root after which it stays below
    // ln tol; start from the analytic root and fix it up against the integer
    // condition.
    let root = j_max + (j_max * j_max - T::lit(2.0) * log_tol / e).sqrt();
    let mut n = root.floor().to_i64().ok_or(Error::Overflow { exponent: root.as_f64(), context: "window size" })?.max(0);
    while log_coeff(n + 1) >= log_tol {
        n += 1;
    }
    while n > 0 && log_coeff(n) < log_tol && T::from_int(n) > j_max {
        n -= 1;
    }
    Ok(BasisWindow::new(n as usize))
}

/// Outcome of a quadrature Gram or resolution check.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport<T> {
    /// `‖M - Id‖_max`.
    pub defect: T,
    /// The β grid has fewer points than the integrand's modes require.
    pub aliased: bool,
    /// β points needed for an exact trapezoid rule on this integrand.
    pub required_beta_points: usize,
    /// Largest fraction of a diagonal entry's quadrature sum carried by
    /// nodes with `|J| > J_max`.
    pub outside_j_max: T,
    pub matrix: OperatorMatrix<T>,
}

/// Tensor quadrature (trapezoid in β × recentred Gauss–Hermite in J) of
/// `∫ h_{mn}(x) μ(dx)` for every pair in the window.
///
/// Nodes for entry `(m, n)` are centred at `J0 = (m + n)/2`; with
/// `J = J0 + t/√eps` the measure becomes
/// `π^{-1/2} e^{-eps J0²} e^{-2 √eps J0 t} e^{-t²} dt` (β-average omitted).
pub(crate) fn tensor_integral<T: Real>(
    window: BasisWindow,
    eps: Epsilon<T>,
    quad: &QuadratureConfig<T>,
    mut integrand: impl FnMut(i64, i64, &PhasePoint<T>) -> Result<Complex<T>>,
) -> Result<(OperatorMatrix<T>, T)> {
    let rule = gauss_hermite_rule::<T>(quad.gh_nodes)?;
    let e = eps.value();
    let root_e = e.sqrt();
    let inv_sqrt_pi = T::one() / T::PI().sqrt();
    let m_beta = quad.beta_points;
    let betas: Vec<T> = (0..m_beta)
        .map(|j| T::TAU() * T::from_int(j as i64) / T::from_int(m_beta as i64))
        .collect();
    let inv_m = T::one() / T::from_int(m_beta as i64);
    let mut outside = T::zero();

    let matrix = OperatorMatrix::try_from_fn(window, eps, |m, n| {
        let j0 = T::from_int(m + n) / T::lit(2.0);
        let mut acc = zero::<T>();
        let mut total_mass = T::zero();
        let mut outside_mass = T::zero();
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let j = j0 + t / root_e;
            let weight = w * inv_sqrt_pi * (-e * j0 * j0 - T::lit(2.0) * root_e * j0 * t).exp();
            let mut beta_avg = zero::<T>();
            for &b in &betas {
                let x = PhasePoint::new(b, j)?;
                beta_avg += integrand(m, n, &x)?;
            }
            let contribution = beta_avg * (weight * inv_m);
            if m == n {
                total_mass += contribution.norm();
                if j.abs() > quad.j_max {
                    outside_mass += contribution.norm();
                }
            }
            acc += contribution;
        }
        if m == n && total_mass > T::zero() {
            outside = outside.max(outside_mass / total_mass);
        }
        Ok(acc)
    })?;
    Ok((matrix, outside))
}

pub(crate) fn identity_defect<T: Real>(m: &OperatorMatrix<T>) -> T {
    m.iter_entries()
        .map(|(r, c, v)| (v - if r == c { one() } else { zero() }).norm())
        .fold(T::zero(), T::max)
}

/// `‖G - Id‖_max` for the quadrature Gram matrix `G_{mn} = ∫ conj(Φ_m) Φ_n dμ`.
///
/// An undersampled β grid is not an error here: the defect is returned as
/// computed and `aliased` is set.
pub fn orthonormality_defect<T: Real>(
    window: BasisWindow,
    eps: Epsilon<T>,
    quad: &QuadratureConfig<T>,
) -> Result<DefectReport<T>> {
    let (matrix, outside) = tensor_integral(window, eps, quad, |m, n, x| {
        Ok(phi(m, x, eps)?.conj() * phi(n, x, eps)?)
    })?;
    let required = 2 * window.n_max() + 1;
    Ok(DefectReport {
        defect: identity_defect(&matrix),
        aliased: quad.beta_points < required,
        required_beta_points: required,
        outside_j_max: outside,
        matrix,
    })
}

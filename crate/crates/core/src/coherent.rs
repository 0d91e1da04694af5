//! Truncated coherent states `|x> = N(J)^{-1/2} Σ_n conj(Φ_n(x)) |n>` and the
//! checks of their two defining conditions.

use num_complex::Complex;

use crate::basis::{identity_defect, normalization, phi, tensor_integral, DefectReport};
use crate::error::Result;
use crate::matrix::zero;
use crate::phase_space::{BasisWindow, Epsilon, PhasePoint};
use crate::quadrature::QuadratureConfig;
use crate::scalar::Real;

/// Coefficients `<n|x>` for `n` in the window.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentVector<T> {
    window: BasisWindow,
    coeffs: Vec<Complex<T>>,
    point: PhasePoint<T>,
    eps: Epsilon<T>,
    norm_defect: T,
}

impl<T: Real> CoherentVector<T> {
    pub fn window(&self) -> BasisWindow {
        self.window
    }

    pub fn point(&self) -> PhasePoint<T> {
        self.point
    }

    pub fn eps(&self) -> Epsilon<T> {
        self.eps
    }

    /// Coefficients in position order `-N..=N`.
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// `<n|x>`, zero outside the window.
    pub fn coeff(&self, n: i64) -> Complex<T> {
        self.window.position(n).map(|i| self.coeffs[i]).unwrap_or_else(zero)
    }

    /// `1 - ‖c‖²`: the weight lost to truncation.
    pub fn norm_defect(&self) -> T {
        self.norm_defect
    }

    pub fn norm_sqr(&self) -> T {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `<self|other> = Σ conj(c_n) c'_n`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).fold(zero(), |acc, v| acc + v)
    }
}

/// Builds the truncated coherent vector at `x`.
pub fn coherent_vector<T: Real>(
    x: &PhasePoint<T>,
    eps: Epsilon<T>,
    window: BasisWindow,
) -> Result<CoherentVector<T>> {
    let norm = normalization(x.j(), eps, T::epsilon())?;
    let scale = T::one() / norm.value.sqrt();
    let coeffs = window
        .indices()
        .map(|n| phi(n, x, eps).map(|v| v.conj() * scale))
        .collect::<Result<Vec<_>>>()?;
    let norm_sq: T = coeffs.iter().map(|c| c.norm_sqr()).sum();
    Ok(CoherentVector { window, coeffs, point: *x, eps, norm_defect: T::one() - norm_sq })
}

/// `<x1|x2> = Σ_n Φ_n(x1) conj(Φ_n(x2)) / sqrt(N(J1) N(J2))`.
pub fn overlap<T: Real>(
    x1: &PhasePoint<T>,
    x2: &PhasePoint<T>,
    eps: Epsilon<T>,
    window: BasisWindow,
) -> Result<Complex<T>> {
    let a = coherent_vector(x1, eps, window)?;
    let b = coherent_vector(x2, eps, window)?;
    Ok(a.inner(&b))
}

/// `‖M - Id‖_max` for `M_{mn} = ∫ <m|x><x|n> N(J) μ(dx)`, i.e. the
/// resolution of the identity with `ν = N μ`, integrated on the same nodes as
/// [`crate::basis::orthonormality_defect`].
pub fn resolution_defect<T: Real>(
    eps: Epsilon<T>,
    window: BasisWindow,
    quad: &QuadratureConfig<T>,
) -> Result<DefectReport<T>> {
    let (matrix, outside) = tensor_integral(window, eps, quad, |m, n, x| {
        let norm = normalization(x.j(), eps, T::epsilon())?.value;
        let scale = T::one() / norm.sqrt();
        let ket_m = phi(m, x, eps)?.conj() * scale; // <m|x>
        let bra_n = phi(n, x, eps)? * scale; // <x|n>
        Ok(ket_m * bra_n * norm)
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::orthonormality_defect;
    use crate::matrix::max_scaled_deviation;

    fn eps(v: f64) -> Epsilon<f64> {
        Epsilon::new(v).unwrap()
    }

    fn pt(b: f64, j: f64) -> PhasePoint<f64> {
        PhasePoint::new(b, j).unwrap()
    }

    #[test]
    fn origin_vector() {
        let c = coherent_vector(&pt(0.0, 0.0), eps(1.0), BasisWindow::new(6)).unwrap();
        assert!((c.coeff(0).re - 1.0 / 1.7726372f64.sqrt()).abs() < 1e-7);
        assert!((c.coeff(0).re - 0.7510867).abs() < 1e-7);
        for n in 1..=6 {
            assert_eq!(c.coeff(n), c.coeff(-n));
            assert_eq!(c.coeff(n).im, 0.0);
        }
        assert!(c.norm_defect().abs() < 1e-14);
    }

    #[test]
    fn beta_does_not_change_origin_coefficient() {
        let c = coherent_vector(&pt(2.0, 0.0), eps(1.0), BasisWindow::new(5)).unwrap();
        assert!((c.coeff(0).re - 0.7510867).abs() < 1e-7);
    }

    #[test]
    fn self_overlap_is_one() {
        let w = BasisWindow::new(11);
        for &(b, j) in &[(0.0, 0.0), (1.0, 2.5), (5.0, -3.0)] {
            let o = overlap(&pt(b, j), &pt(b, j), eps(1.0), w).unwrap();
            assert!((o - Complex::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn overlap_hermitian_symmetry() {
        let w = BasisWindow::new(10);
        let (a, b) = (pt(0.4, 1.2), pt(2.9, -0.8));
        let ab = overlap(&a, &b, eps(0.7), w).unwrap();
        let ba = overlap(&b, &a, eps(0.7), w).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-15);
        assert!(ab.norm() <= 1.0);
    }

    #[test]
    fn resolution_matches_gram() {
        let w = BasisWindow::new(5);
        let e = eps(1.0);
        let q = QuadratureConfig::auto(w, 0, 6.0, 1e-10).unwrap();
        let res = resolution_defect(e, w, &q).unwrap();
        let gram = orthonormality_defect(w, e, &q).unwrap();
        assert!(res.defect < 1e-10);
        assert!(max_scaled_deviation(&res.matrix, &gram.matrix, |_, _| true).unwrap() < 1e-12);
        assert!((res.defect - gram.defect).abs() < 1e-12);
    }

    #[test]
    fn resolution_single_mode() {
        let w = BasisWindow::new(0);
        let q = QuadratureConfig::auto(w, 0, 6.0, 1e-10).unwrap();
        assert!(resolution_defect(eps(1.0), w, &q).unwrap().defect < 1e-12);
    }

    #[test]
    fn outside_mass_reported() {
        let w = BasisWindow::new(5);
        let q = QuadratureConfig::auto(w, 0, 1.0, 1e-10).unwrap();
        let r = resolution_defect(eps(1.0), w, &q).unwrap();
        // The n = 5 diagonal is centred at J = 5, far outside |J| <= 1.
        assert!(r.outside_j_max > 0.9);
    }
}

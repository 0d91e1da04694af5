//! Quadrature oracle for `O_f = ∫ f(x) |x><x| ν(dx)`.
//!
//! Matrix elements reduce to `<m|O_f|n> = ∫ f conj(Φ_m) Φ_n dμ`. Nothing here
//! uses the analytic operator formulas of [`crate::closed_forms`]; all
//! values come from Gauss–Hermite (and, for pointwise observables, trapezoid)
//! quadrature.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::{zero, OperatorMatrix};
use crate::phase_space::{checked_exp, BasisWindow, Epsilon, LaurentCoefficients};
use crate::quadrature::{anti_aliasing_points, gauss_hermite_rule, GaussHermiteRule, QuadratureConfig};
use crate::scalar::Real;

type ProfileFn<T> = Arc<dyn Fn(T) -> Complex<T> + Send + Sync>;
type PointFn<T> = Arc<dyn Fn(T, T) -> Complex<T> + Send + Sync>;

/// A function of `J` with declared growth `|g(J)| ≲ e^{growth |J|}`.
#[derive(Clone)]
pub struct JProfile<T> {
    f: ProfileFn<T>,
    growth: T,
}

impl<T: Real> JProfile<T> {
    pub fn new(growth: T, f: impl Fn(T) -> Complex<T> + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), growth }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::new(T::zero(), move |_| c)
    }

    /// `c · e^{rate J}`.
    pub fn exponential(c: Complex<T>, rate: T) -> Self {
        Self::new(rate.abs(), move |j| c * (rate * j).exp())
    }

    /// `J^m`; polynomial growth is integrated exactly by enough nodes, so it
    /// declares zero exponential growth.
    pub fn power(m: u32) -> Self {
        Self::new(T::zero(), move |j| Complex::new(j.powi(m as i32), T::zero()))
    }

    #[inline]
    pub fn eval(&self, j: T) -> Complex<T> {
        (self.f)(j)
    }

    pub fn growth(&self) -> T {
        self.growth
    }
}

impl<T: fmt::Debug> fmt::Debug for JProfile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JProfile").field("growth", &self.growth).finish_non_exhaustive()
    }
}

/// `f(β, J) = Σ_k g_k(J) e^{ikβ}` over finitely many modes.
#[derive(Clone, Debug, Default)]
pub struct FourierObservable<T> {
    modes: BTreeMap<i64, JProfile<T>>,
}

impl<T: Real> FourierObservable<T> {
    pub fn new() -> Self {
        Self { modes: BTreeMap::new() }
    }

    pub fn with_mode(mut self, k: i64, profile: JProfile<T>) -> Self {
        self.modes.insert(k, profile);
        self
    }

    pub fn mode(&self, k: i64) -> Option<&JProfile<T>> {
        self.modes.get(&k)
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, &JProfile<T>)> {
        self.modes.iter().map(|(&k, p)| (k, p))
    }
}

/// An arbitrary callable `f(β, J)` with declared β-bandwidth and J-growth.
#[derive(Clone)]
pub struct PointwiseObservable<T> {
    f: PointFn<T>,
    bandwidth: u64,
    growth: T,
}

impl<T: Real> PointwiseObservable<T> {
    pub fn new(bandwidth: u64, growth: T, f: impl Fn(T, T) -> Complex<T> + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), bandwidth, growth }
    }

    #[inline]
    pub fn eval(&self, beta: T, j: T) -> Complex<T> {
        (self.f)(beta, j)
    }
}

impl<T: fmt::Debug> fmt::Debug for PointwiseObservable<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointwiseObservable")
            .field("bandwidth", &self.bandwidth)
            .field("growth", &self.growth)
            .finish_non_exhaustive()
    }
}

/// A classical observable in one of three representations.
#[derive(Clone, Debug)]
pub enum ObservableSpec<T> {
    Fourier(FourierObservable<T>),
    Laurent(LaurentCoefficients<T>),
    Pointwise(PointwiseObservable<T>),
}

impl<T: Real> ObservableSpec<T> {
    pub fn constant(c: Complex<T>) -> Self {
        Self::Laurent(LaurentCoefficients::monomial(0, 0, c))
    }

    /// `J^m` as a single-mode Fourier observable.
    pub fn j_power(m: u32) -> Self {
        Self::Fourier(FourierObservable::new().with_mode(0, JProfile::power(m)))
    }

    /// The sawtooth `β ∈ [0, 2π)` through its Fourier coefficients
    /// `c_0 = π`, `c_k = i/k`, truncated to `|k| <= k_max`.
    pub fn sawtooth(k_max: u64) -> Self {
        let mut obs = FourierObservable::new().with_mode(0, JProfile::constant(Complex::new(T::PI(), T::zero())));
        for k in 1..=k_max as i64 {
            for s in [k, -k] {
                let c = Complex::new(T::zero(), T::one() / T::from_int(s));
                obs = obs.with_mode(s, JProfile::constant(c));
            }
        }
        Self::Fourier(obs)
    }

    /// `e^{a J} cos(k β)`.
    pub fn exp_cos(a: T, k: i64) -> Self {
        let half = Complex::new(T::lit(0.5), T::zero());
        if k == 0 {
            return Self::Fourier(FourierObservable::new().with_mode(0, JProfile::exponential(Complex::new(T::one(), T::zero()), a)));
        }
        Self::Fourier(
            FourierObservable::new()
                .with_mode(k, JProfile::exponential(half, a))
                .with_mode(-k, JProfile::exponential(half, a)),
        )
    }

    /// Largest β-mode the observable may carry.
    pub fn bandwidth(&self) -> u64 {
        match self {
            Self::Fourier(f) => f.modes.keys().map(|k| k.unsigned_abs()).max().unwrap_or(0),
            Self::Laurent(c) => c.bandwidth(),
            Self::Pointwise(p) => p.bandwidth,
        }
    }

    /// Exponential J-growth rate `a` in `|f| ≲ e^{a|J|}`.
    pub fn growth(&self, eps: Epsilon<T>) -> T {
        match self {
            Self::Fourier(f) => f.modes.values().map(|p| p.growth).fold(T::zero(), T::max),
            Self::Laurent(c) => eps.value() * T::from_int(c.max_degree() as i64),
            Self::Pointwise(p) => p.growth,
        }
    }
}

/// Reusable quadrature state for one `(eps, config)` pair.
struct Oracle<T> {
    eps: Epsilon<T>,
    rule: GaussHermiteRule<T>,
    beta_points: usize,
}

/// Margin (in units of the Gaussian width) the integrand peak must keep from
/// the outermost Gauss–Hermite node.
const PEAK_MARGIN: f64 = 5.0;

impl<T: Real> Oracle<T> {
    fn new(eps: Epsilon<T>, quad: &QuadratureConfig<T>) -> Result<Self> {
        Ok(Self { eps, rule: gauss_hermite_rule(quad.gh_nodes)?, beta_points: quad.beta_points })
    }

    /// After recentring, a profile growing like `e^{a J}` turns the
    /// Gauss–Hermite integrand into `e^{c t - t²}` with `c = a/√eps`, peaked
    /// at `t = c/2`. The peak must sit well inside the node range.
    fn admit(&self, obs: &ObservableSpec<T>) -> Result<()> {
        let growth = obs.growth(self.eps);
        if !(growth.is_finite() && growth >= T::zero()) {
            return Err(Error::InvalidArgument(format!("declared J-growth must be finite and >= 0, got {growth}")));
        }
        let peak = growth / self.eps.value().sqrt() / T::lit(2.0);
        if peak + T::lit(PEAK_MARGIN) > self.rule.largest_node() {
            return Err(Error::GrowthTooFast { growth: growth.as_f64(), nodes: self.rule.len() });
        }
        Ok(())
    }

    fn element(&self, m: i64, n: i64, obs: &ObservableSpec<T>, window: BasisWindow) -> Result<Complex<T>> {
        let e = self.eps.value();
        let root_e = e.sqrt();
        let k = m - n;
        let j0 = T::from_int(m + n) / T::lit(2.0);
        let band_factor = (-e * T::from_int(k * k) / T::lit(4.0)).exp() / T::PI().sqrt();

        let value = match obs {
            ObservableSpec::Fourier(f) => {
                let Some(profile) = f.mode(k) else { return Ok(zero()) };
                self.gh_sum(|t| Ok(profile.eval(j0 + t / root_e)))?
            }
            ObservableSpec::Laurent(c) => {
                let modes = c.modes();
                let Some(terms) = modes.get(&k) else { return Ok(zero()) };
                self.gh_sum(|t| {
                    let j = j0 + t / root_e;
                    let mut g = zero::<T>();
                    for &(degree, coeff) in terms {
                        g += coeff * checked_exp(e * T::from_int(degree) * j, "Laurent quadrature")?;
                    }
                    Ok(g)
                })?
            }
            ObservableSpec::Pointwise(p) => {
                if k.unsigned_abs() > p.bandwidth {
                    return Ok(zero());
                }
                let required = anti_aliasing_points(window, p.bandwidth);
                if self.beta_points < required {
                    return Err(Error::Aliasing { got: self.beta_points, required });
                }
                let count = self.beta_points as i64;
                let inv_count = T::one() / T::from_int(count);
                let step = T::TAU() / T::from_int(count);
                self.gh_sum(|t| {
                    let j = j0 + t / root_e;
                    let mut avg = zero::<T>();
                    for idx in 0..count {
                        let beta = step * T::from_int(idx);
                        // e^{-ik β_idx} with the integer phase reduced mod count.
                        let r = (-k * idx).rem_euclid(count);
                        let angle = step * T::from_int(r);
                        avg += p.eval(beta, j) * Complex::new(angle.cos(), angle.sin());
                    }
                    Ok(avg * inv_count)
                })?
            }
        };
        Ok(value * band_factor)
    }

    fn gh_sum(&self, mut g: impl FnMut(T) -> Result<Complex<T>>) -> Result<Complex<T>> {
        let mut acc = zero::<T>();
        for (&t, &w) in self.rule.nodes.iter().zip(&self.rule.weights) {
            acc += g(t)? * w;
        }
        Ok(acc)
    }
}

/// `<m|O_f|n>` by quadrature. The anti-aliasing bound for pointwise
/// observables is taken for the smallest window containing `m` and `n`.
pub fn matrix_element<T: Real>(
    m: i64,
    n: i64,
    obs: &ObservableSpec<T>,
    eps: Epsilon<T>,
    quad: &QuadratureConfig<T>,
) -> Result<Complex<T>> {
    let oracle = Oracle::new(eps, quad)?;
    oracle.admit(obs)?;
    let window = BasisWindow::new(m.unsigned_abs().max(n.unsigned_abs()) as usize);
    oracle.element(m, n, obs, window)
}

/// Fills the full window. Entries off the observable's β-modes are exact
/// zeros.
pub fn quantize<T: Real>(
    obs: &ObservableSpec<T>,
    eps: Epsilon<T>,
    window: BasisWindow,
    quad: &QuadratureConfig<T>,
) -> Result<OperatorMatrix<T>> {
    let oracle = Oracle::new(eps, quad)?;
    oracle.admit(obs)?;
    if let ObservableSpec::Pointwise(p) = obs {
        quad.check_beta_resolution(window, p.bandwidth)?;
    }
    OperatorMatrix::try_from_fn(window, eps, |m, n| oracle.element(m, n, obs, window))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(v: f64) -> Epsilon<f64> {
        Epsilon::new(v).unwrap()
    }

    fn quad(w: BasisWindow, k: u64) -> QuadratureConfig<f64> {
        QuadratureConfig::auto(w, k, 6.0, 1e-10).unwrap()
    }

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn constant_elements() {
        let w = BasisWindow::new(4);
        let one = ObservableSpec::constant(c(1.0));
        assert_eq!(matrix_element(2, 1, &one, eps(1.0), &quad(w, 0)).unwrap(), zero());
        let d = matrix_element(3, 3, &one, eps(1.0), &quad(w, 0)).unwrap();
        assert!((d - c(1.0)).norm() < 1e-10);
    }

    #[test]
    fn a_band_element() {
        // f = A; only the band m - n = 1 survives, value e^{(eps/2)(2m - 1)}.
        let w = BasisWindow::new(4);
        let a = ObservableSpec::Laurent(LaurentCoefficients::monomial(0, 1, c(1.0)));
        let v = matrix_element(1, 0, &a, eps(1.0), &quad(w, 1)).unwrap();
        assert!((v - c(0.5f64.exp())).norm() < 1e-12);
        assert!((v.re - 1.6487213).abs() < 1e-7);
        assert_eq!(matrix_element(0, 1, &a, eps(1.0), &quad(w, 1)).unwrap(), zero());
    }

    #[test]
    fn quantize_identity_and_j() {
        let w = BasisWindow::new(6);
        let q = quad(w, 0);
        let id = quantize(&ObservableSpec::constant(c(1.0)), eps(1.0), w, &q).unwrap();
        assert!(crate::basis::identity_defect(&id) < 1e-10);

        let oj = quantize(&ObservableSpec::j_power(1), eps(0.5), w, &q).unwrap();
        for n in w.indices() {
            assert!((oj.at(n, n) - c(n as f64)).norm() < 1e-10);
        }
    }

    #[test]
    fn quantize_exp_two_eps_j() {
        let w = BasisWindow::new(3);
        let f = ObservableSpec::exp_cos(2.0, 0);
        let o = quantize(&f, eps(1.0), w, &quad(w, 0)).unwrap();
        assert!((o.at(0, 0).re - std::f64::consts::E).abs() < 1e-10);
        for n in w.indices() {
            let want = (2 * n + 1) as f64;
            assert!(((o.at(n, n).re - want.exp()) / want.exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn pointwise_matches_fourier() {
        let w = BasisWindow::new(4);
        let e = eps(0.8);
        let q = quad(w, 1);
        let pw = ObservableSpec::Pointwise(PointwiseObservable::new(1, 0.8, |b: f64, j: f64| {
            Complex::new((0.8 * j).exp() * b.cos(), 0.0)
        }));
        let fo = ObservableSpec::exp_cos(0.8, 1);
        let a = quantize(&pw, e, w, &q).unwrap();
        let b = quantize(&fo, e, w, &q).unwrap();
        assert!(crate::matrix::max_scaled_deviation(&a, &b, |_, _| true).unwrap() < 1e-12);
    }

    #[test]
    fn pointwise_aliasing_rejected() {
        let w = BasisWindow::new(4);
        let q = QuadratureConfig::new(32, 10, 6.0, 1e-10).unwrap();
        let pw = ObservableSpec::Pointwise(PointwiseObservable::new(1, 0.0, |b: f64, _| Complex::new(b.cos(), 0.0)));
        assert!(matches!(quantize(&pw, eps(1.0), w, &q), Err(Error::Aliasing { .. })));
    }

    #[test]
    fn runaway_growth_rejected() {
        let w = BasisWindow::new(2);
        let q = QuadratureConfig::new(16, 9, 3.0, 1e-10).unwrap();
        let f = ObservableSpec::exp_cos(40.0, 0);
        assert!(matches!(quantize(&f, eps(1.0), w, &q), Err(Error::GrowthTooFast { .. })));
    }
}

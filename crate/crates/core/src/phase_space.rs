//! Phase-space domain types for the cylinder T*(S¹) and the elementary
//! classical observables living on it.
//!
//! A point is a pair `(beta, J)` with `beta` an angle and `J` the conjugate
//! momentum. All Gaussians in the construction are governed by a single
//! positive parameter `eps`.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Positive regularization parameter of the Gaussian weights.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Epsilon<T>(T);

impl<T: Real> Epsilon<T> {
    pub fn new(value: T) -> Result<Self> {
        if value.is_finite() && value > T::zero() {
            Ok(Self(value))
        } else {
            Err(Error::InvalidEpsilon(value.as_f64()))
        }
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }
}

/// A point `(beta, J)` of the cylinder. `beta` is reduced into `[0, 2π)` on
/// construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint<T> {
    beta: T,
    j: T,
}

impl<T: Real> PhasePoint<T> {
    pub fn new(beta: T, j: T) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::NonFinite { what: "beta", value: beta.as_f64() });
        }
        if !j.is_finite() {
            return Err(Error::NonFinite { what: "J", value: j.as_f64() });
        }
        Ok(Self { beta: reduce_angle(beta), j })
    }

    #[inline]
    pub fn beta(&self) -> T {
        self.beta
    }

    #[inline]
    pub fn j(&self) -> T {
        self.j
    }

    /// The same point with `beta` shifted by `delta` (and re-reduced).
    pub fn shifted(&self, delta: T) -> Result<Self> {
        Self::new(self.beta + delta, self.j)
    }
}

fn reduce_angle<T: Real>(beta: T) -> T {
    let two_pi = T::TAU();
    let mut r = beta % two_pi;
    if r < T::zero() {
        r += two_pi;
    }
    // `r + 2π` can round up to exactly 2π for tiny negative inputs.
    if r >= two_pi {
        r = T::zero();
    }
    r
}

/// Symmetric truncation `{-N, ..., N}` of the integer basis index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisWindow {
    n_max: usize,
}

impl BasisWindow {
    pub fn new(n_max: usize) -> Self {
        Self { n_max }
    }

    #[inline]
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    #[inline]
    pub fn size(&self) -> usize {
        2 * self.n_max + 1
    }

    pub fn indices(&self) -> RangeInclusive<i64> {
        let n = self.n_max as i64;
        -n..=n
    }

    #[inline]
    pub fn contains(&self, index: i64) -> bool {
        index.unsigned_abs() <= self.n_max as u64
    }

    /// Zero-based storage position of a basis index.
    #[inline]
    pub fn position(&self, index: i64) -> Option<usize> {
        self.contains(index).then(|| (index + self.n_max as i64) as usize)
    }

    /// Basis index stored at a zero-based position.
    #[inline]
    pub fn index_at(&self, position: usize) -> i64 {
        position as i64 - self.n_max as i64
    }
}

/// Finitely supported coefficients `c_{pq}` of `f = Σ c_{pq} (A*)^p A^q`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentCoefficients<T> {
    entries: BTreeMap<(i64, i64), Complex<T>>,
}

impl<T: Real> LaurentCoefficients<T> {
    pub fn new() -> Self {
        Self { entries: BTreeMap::new() }
    }

    /// Single monomial `c · (A*)^p A^q`.
    pub fn monomial(p: i64, q: i64, c: Complex<T>) -> Self {
        let mut out = Self::new();
        out.insert(p, q, c);
        out
    }

    /// Adds `c` to the coefficient of `(A*)^p A^q`. Exact zeros are not stored.
    pub fn insert(&mut self, p: i64, q: i64, c: Complex<T>) {
        let slot = self.entries.entry((p, q)).or_insert_with(|| Complex::new(T::zero(), T::zero()));
        *slot += c;
        if slot.re == T::zero() && slot.im == T::zero() {
            self.entries.remove(&(p, q));
        }
    }

    pub fn get(&self, p: i64, q: i64) -> Complex<T> {
        self.entries.get(&(p, q)).copied().unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), Complex<T>)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Coefficients of the complex-conjugate observable: `c'_{pq} = conj(c_{qp})`.
    pub fn conjugate_transpose(&self) -> Self {
        let entries = self.entries.iter().map(|(&(p, q), c)| ((q, p), c.conj())).collect();
        Self { entries }
    }

    /// Largest β-mode `|q - p|` present in the support.
    pub fn bandwidth(&self) -> u64 {
        self.entries.keys().map(|&(p, q)| (q - p).unsigned_abs()).max().unwrap_or(0)
    }

    /// Largest `|p + q|`; `eps` times this bounds the J-growth rate.
    pub fn max_degree(&self) -> u64 {
        self.entries.keys().map(|&(p, q)| (p + q).unsigned_abs()).max().unwrap_or(0)
    }

    /// Groups the support by β-mode `k = q - p`.
    pub fn modes(&self) -> BTreeMap<i64, Vec<(i64, Complex<T>)>> {
        let mut out: BTreeMap<i64, Vec<(i64, Complex<T>)>> = BTreeMap::new();
        for (&(p, q), &c) in &self.entries {
            out.entry(q - p).or_default().push((p + q, c));
        }
        out
    }
}

impl<T: Real> FromIterator<((i64, i64), Complex<T>)> for LaurentCoefficients<T> {
    fn from_iter<I: IntoIterator<Item = ((i64, i64), Complex<T>)>>(iter: I) -> Self {
        let mut out = Self::new();
        for ((p, q), c) in iter {
            out.insert(p, q, c);
        }
        out
    }
}

/// `exp(x)` that reports overflow instead of returning infinity.
pub(crate) fn checked_exp<T: Real>(x: T, context: &'static str) -> Result<T> {
    if x > T::max_exp_arg() || x.is_nan() {
        Err(Error::Overflow { exponent: x.as_f64(), context })
    } else {
        Ok(x.exp())
    }
}

/// `e^{i k beta}` with the integer multiple kept exact before the phase is
/// reduced.
pub(crate) fn unit_phase<T: Real>(k: i64, beta: T) -> Complex<T> {
    let angle = T::from_int(k) * beta;
    Complex::new(angle.cos(), angle.sin())
}

/// Density of `μ(dβ, dJ)` with respect to `dβ dJ`:
/// `sqrt(eps/π) / (2π) · e^{-eps J²}`.
pub fn measure_weight<T: Real>(x: &PhasePoint<T>, eps: Epsilon<T>) -> T {
    let e = eps.value();
    (e / T::PI()).sqrt() / T::TAU() * (-e * x.j * x.j).exp()
}

/// `A(beta, J) = e^{eps J + i beta}`.
#[allow(non_snake_case)]
pub fn classical_A<T: Real>(x: &PhasePoint<T>, eps: Epsilon<T>) -> Result<Complex<T>> {
    let modulus = checked_exp(eps.value() * x.j, "classical A")?;
    Ok(unit_phase(1, x.beta) * modulus)
}

/// Complex conjugate of [`classical_A`].
#[allow(non_snake_case)]
pub fn classical_A_star<T: Real>(x: &PhasePoint<T>, eps: Epsilon<T>) -> Result<Complex<T>> {
    classical_A(x, eps).map(|a| a.conj())
}

/// Evaluates `Σ c_{pq} (A*)^p A^q = Σ c_{pq} e^{eps (p+q) J} e^{i (q-p) beta}`.
pub fn eval_laurent<T: Real>(
    c: &LaurentCoefficients<T>,
    x: &PhasePoint<T>,
    eps: Epsilon<T>,
) -> Result<Complex<T>> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for ((p, q), coeff) in c.iter() {
        let modulus = checked_exp(eps.value() * T::from_int(p + q) * x.j, "Laurent evaluation")?;
        acc += coeff * unit_phase(q - p, x.beta) * modulus;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(v: f64) -> Epsilon<f64> {
        Epsilon::new(v).unwrap()
    }

    fn pt(b: f64, j: f64) -> PhasePoint<f64> {
        PhasePoint::new(b, j).unwrap()
    }

    #[test]
    fn epsilon_rejects_nonpositive() {
        assert!(Epsilon::new(0.0).is_err());
        assert!(Epsilon::new(-1.0).is_err());
        assert!(Epsilon::new(f64::NAN).is_err());
        assert!(Epsilon::new(f64::INFINITY).is_err());
    }

    #[test]
    fn beta_is_reduced() {
        let x = pt(-0.5, 1.0);
        assert!((x.beta() - (std::f64::consts::TAU - 0.5)).abs() < 1e-15);
        assert_eq!(pt(std::f64::consts::TAU, 0.0).beta(), 0.0);
        let tiny = pt(-1e-300, 0.0).beta();
        assert!((0.0..std::f64::consts::TAU).contains(&tiny));
        assert!(PhasePoint::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn window_indexing() {
        let w = BasisWindow::new(3);
        assert_eq!(w.size(), 7);
        assert_eq!(w.position(-3), Some(0));
        assert_eq!(w.position(3), Some(6));
        assert_eq!(w.position(4), None);
        assert_eq!(w.index_at(4), 1);
        assert_eq!(w.indices().count(), 7);
    }

    #[test]
    fn measure_weight_values() {
        let base = 1.0 / std::f64::consts::TAU * (1.0 / std::f64::consts::PI).sqrt();
        assert!((measure_weight(&pt(0.0, 0.0), eps(1.0)) - base).abs() < 1e-15);
        assert!((base - 0.0897936).abs() < 1e-7);
        let w = measure_weight(&pt(2.0, 0.0), eps(std::f64::consts::PI));
        assert!((w - 1.0 / std::f64::consts::TAU).abs() < 1e-15);
        let w = measure_weight(&pt(1.0, 2.0), eps(1.0));
        assert!((w - base * (-4.0f64).exp()).abs() < 1e-16);
        assert!((w - 1.644626e-3).abs() < 1e-9);
    }

    #[test]
    fn classical_a_values() {
        let a = classical_A(&pt(0.0, 0.0), eps(0.3)).unwrap();
        assert_eq!(a, Complex::new(1.0, 0.0));
        let a = classical_A(&pt(std::f64::consts::FRAC_PI_2, 0.0), eps(2.0)).unwrap();
        assert!((a - Complex::new(0.0, 1.0)).norm() < 1e-15);
        let a = classical_A(&pt(0.0, 1.0), eps(1.0)).unwrap();
        assert!((a.re - std::f64::consts::E).abs() < 1e-15);
        let s = classical_A_star(&pt(1.0, 1.0), eps(1.0)).unwrap();
        assert_eq!(s, classical_A(&pt(1.0, 1.0), eps(1.0)).unwrap().conj());
    }

    #[test]
    fn classical_a_overflow_is_reported() {
        let err = classical_A(&pt(0.0, 1000.0), eps(1.0)).unwrap_err();
        assert!(matches!(err, Error::Overflow { .. }));
        let c = LaurentCoefficients::monomial(3, 3, Complex::new(1.0, 0.0));
        assert!(eval_laurent(&c, &pt(0.0, 200.0), eps(1.0)).is_err());
    }

    #[test]
    fn laurent_examples() {
        let one = LaurentCoefficients::monomial(0, 0, Complex::new(1.0, 0.0));
        assert_eq!(eval_laurent(&one, &pt(1.3, -2.0), eps(0.7)).unwrap(), Complex::new(1.0, 0.0));

        let aa = LaurentCoefficients::monomial(1, 1, Complex::new(1.0, 0.0));
        for &(b, j) in &[(0.0, 0.5), (2.0, 0.5), (4.0, -1.0)] {
            let v = eval_laurent(&aa, &pt(b, j), eps(0.8)).unwrap();
            assert!((v - Complex::new((1.6 * j).exp(), 0.0)).norm() < 1e-14);
        }

        let a = LaurentCoefficients::monomial(0, 1, Complex::new(1.0, 0.0));
        assert_eq!(eval_laurent(&a, &pt(0.0, 0.0), eps(1.0)).unwrap(), Complex::new(1.0, 0.0));
    }

    #[test]
    fn insert_accumulates_and_drops_zeros() {
        let mut c = LaurentCoefficients::<f64>::new();
        c.insert(1, 2, Complex::new(1.0, 0.0));
        c.insert(1, 2, Complex::new(-1.0, 0.0));
        assert!(c.is_empty());
        c.insert(-1, 2, Complex::new(0.5, 1.0));
        c.insert(0, 0, Complex::new(2.0, 0.0));
        assert_eq!(c.bandwidth(), 3);
        assert_eq!(c.max_degree(), 1);
        assert_eq!(c.conjugate_transpose().get(2, -1), Complex::new(0.5, -1.0));
    }

    #[test]
    fn works_in_single_precision() {
        let e = Epsilon::new(1.0f32).unwrap();
        let a = classical_A(&PhasePoint::new(0.0f32, 1.0).unwrap(), e).unwrap();
        assert!((a.re - std::f32::consts::E).abs() < 1e-6);
    }
}

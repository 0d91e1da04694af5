//! Dense complex operator matrices indexed by a [`BasisWindow`].

use std::ops::{Add, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::phase_space::{BasisWindow, Epsilon};
use crate::scalar::Real;

/// Dense `(2N+1) × (2N+1)` matrix; row index `m`, column index `n`, both
/// running over `-N..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix<T> {
    window: BasisWindow,
    eps: Epsilon<T>,
    entries: Vec<Complex<T>>,
}

impl<T: Real> OperatorMatrix<T> {
    pub fn zeros(window: BasisWindow, eps: Epsilon<T>) -> Self {
        let d = window.size();
        Self { window, eps, entries: vec![zero(); d * d] }
    }

    pub fn identity(window: BasisWindow, eps: Epsilon<T>) -> Self {
        Self::from_fn(window, eps, |m, n| if m == n { one() } else { zero() })
    }

    /// Builds the matrix from a function of the basis indices `(m, n)`.
    pub fn from_fn(window: BasisWindow, eps: Epsilon<T>, mut f: impl FnMut(i64, i64) -> Complex<T>) -> Self {
        let mut out = Self::zeros(window, eps);
        let d = window.size();
        for r in 0..d {
            for c in 0..d {
                out.entries[r * d + c] = f(window.index_at(r), window.index_at(c));
            }
        }
        out
    }

    pub fn try_from_fn(
        window: BasisWindow,
        eps: Epsilon<T>,
        mut f: impl FnMut(i64, i64) -> Result<Complex<T>>,
    ) -> Result<Self> {
        let mut out = Self::zeros(window, eps);
        let d = window.size();
        for r in 0..d {
            for c in 0..d {
                out.entries[r * d + c] = f(window.index_at(r), window.index_at(c))?;
            }
        }
        Ok(out)
    }

    #[inline]
    pub fn window(&self) -> BasisWindow {
        self.window
    }

    #[inline]
    pub fn eps(&self) -> Epsilon<T> {
        self.eps
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.window.size()
    }

    /// Row-major storage in position order `-N..=N`.
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.entries
    }

    /// Entry `<m|O|n>`; `None` when either index lies outside the window.
    pub fn get(&self, m: i64, n: i64) -> Option<Complex<T>> {
        let r = self.window.position(m)?;
        let c = self.window.position(n)?;
        Some(self.entries[r * self.dim() + c])
    }

    /// Entry by basis index; panics outside the window.
    #[inline]
    pub fn at(&self, m: i64, n: i64) -> Complex<T> {
        self.get(m, n).unwrap_or_else(|| panic!("({m}, {n}) outside window"))
    }

    pub(crate) fn set(&mut self, m: i64, n: i64, value: Complex<T>) {
        let d = self.dim();
        let r = self.window.position(m).expect("row in window");
        let c = self.window.position(n).expect("column in window");
        self.entries[r * d + c] = value;
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.window != other.window {
            return Err(Error::Mismatch("basis window"));
        }
        if self.eps != other.eps {
            return Err(Error::Mismatch("epsilon"));
        }
        Ok(())
    }

    /// Matrix product with a fixed left-to-right summation order per entry.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        let d = self.dim();
        let mut out = Self::zeros(self.window, self.eps);
        for r in 0..d {
            for k in 0..d {
                let a = self.entries[r * d + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for c in 0..d {
                    out.entries[r * d + c] += a * rhs.entries[k * d + c];
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.dim();
        let mut out = Self::zeros(self.window, self.eps);
        for r in 0..d {
            for c in 0..d {
                out.entries[c * d + r] = self.entries[r * d + c].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut out = self.clone();
        out.entries.iter_mut().for_each(|e| *e *= s);
        out
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        let mut out = self.clone();
        out.entries.iter_mut().zip(&rhs.entries).for_each(|(a, b)| *a += *b);
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        let mut out = self.clone();
        out.entries.iter_mut().zip(&rhs.entries).for_each(|(a, b)| *a -= *b);
        Ok(out)
    }

    /// `max |entry|`.
    pub fn max_abs(&self) -> T {
        self.entries.iter().map(|e| e.norm()).fold(T::zero(), T::max)
    }

    /// `‖O - O†‖_max`.
    pub fn hermiticity_defect(&self) -> T {
        let d = self.dim();
        let mut worst = T::zero();
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.entries[r * d + c] - self.entries[c * d + r].conj()).norm());
            }
        }
        worst
    }

    /// Entries on the band `m - n = k`, in increasing `m`.
    pub fn band(&self, k: i64) -> Vec<(i64, i64, Complex<T>)> {
        self.window
            .indices()
            .filter_map(|m| self.get(m, m - k).map(|v| (m, m - k, v)))
            .collect()
    }

    /// Iterates `(m, n, value)` over all entries, row-major.
    pub fn iter_entries(&self) -> impl Iterator<Item = (i64, i64, Complex<T>)> + '_ {
        let d = self.dim();
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.window.index_at(i / d), self.window.index_at(i % d), v))
    }

    /// Smallest eigenvalue of a Hermitian matrix.
    ///
    /// Uses cyclic Jacobi rotations on the real symmetric embedding
    /// `[[Re, -Im], [Im, Re]]`, whose spectrum is that of `O` doubled.
    pub fn min_eigenvalue(&self) -> Result<T> {
        let tol = T::lit(T::ROUND_OFF).sqrt() * self.max_abs().max(T::one());
        if self.hermiticity_defect() > tol {
            return Err(Error::InvalidArgument("eigenvalues requested for a non-Hermitian matrix".into()));
        }
        let eig = symmetric_eigenvalues(self.real_embedding(), 2 * self.dim())?;
        Ok(eig.into_iter().fold(T::infinity(), T::min))
    }

    fn real_embedding(&self) -> Vec<T> {
        let d = self.dim();
        let s = 2 * d;
        let mut a = vec![T::zero(); s * s];
        for r in 0..d {
            for c in 0..d {
                // Hermitian part only, so the embedding is exactly symmetric.
                let v = (self.entries[r * d + c] + self.entries[c * d + r].conj()) * T::lit(0.5);
                a[r * s + c] = v.re;
                a[(r + d) * s + (c + d)] = v.re;
                a[(r + d) * s + c] = v.im;
                a[r * s + (c + d)] = -v.im;
            }
        }
        a
    }
}

/// Eigenvalues of a dense real symmetric matrix, cyclic Jacobi.
pub(crate) fn symmetric_eigenvalues<T: Real>(mut a: Vec<T>, n: usize) -> Result<Vec<T>> {
    const MAX_SWEEPS: usize = 100;
    let frob: T = a.iter().map(|&x| x * x).sum::<T>().sqrt();
    let threshold = T::epsilon() * frob.max(T::min_positive_value());
    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<T>()
            .sqrt();
        if off <= threshold {
            return Ok((0..n).map(|i| a[i * n + i]).collect());
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(Error::Convergence("Jacobi eigenvalue sweep"))
}

impl<T: Real> Add for &OperatorMatrix<T> {
    type Output = OperatorMatrix<T>;
    fn add(self, rhs: Self) -> OperatorMatrix<T> {
        self.try_add(rhs).expect("compatible operands")
    }
}

impl<T: Real> Sub for &OperatorMatrix<T> {
    type Output = OperatorMatrix<T>;
    fn sub(self, rhs: Self) -> OperatorMatrix<T> {
        self.try_sub(rhs).expect("compatible operands")
    }
}

#[inline]
pub(crate) fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn one<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// `|a - b| / max(1, |b|)`: absolute near unit scale, relative for large
/// reference values.
pub fn scaled_deviation<T: Real>(a: Complex<T>, reference: Complex<T>) -> T {
    (a - reference).norm() / reference.norm().max(T::one())
}

/// Maximum [`scaled_deviation`] over entries whose row and column both satisfy
/// `keep`.
pub fn max_scaled_deviation<T: Real>(
    a: &OperatorMatrix<T>,
    reference: &OperatorMatrix<T>,
    keep: impl Fn(i64, i64) -> bool,
) -> Result<T> {
    a.check_compatible(reference)?;
    Ok(a
        .iter_entries()
        .zip(reference.as_slice())
        .filter(|((m, n, _), _)| keep(*m, *n))
        .map(|((_, _, x), &r)| scaled_deviation(x, r))
        .fold(T::zero(), T::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps() -> Epsilon<f64> {
        Epsilon::new(1.0).unwrap()
    }

    #[test]
    fn identity_product() {
        let w = BasisWindow::new(2);
        let a = OperatorMatrix::from_fn(w, eps(), |m, n| Complex::new((m * 3 + n) as f64, (m - n) as f64));
        let id = OperatorMatrix::identity(w, eps());
        assert_eq!(a.matmul(&id).unwrap(), a);
        assert_eq!(id.matmul(&a).unwrap(), a);
    }

    #[test]
    fn adjoint_is_involution() {
        let w = BasisWindow::new(2);
        let a = OperatorMatrix::from_fn(w, eps(), |m, n| Complex::new(m as f64, n as f64 * 0.5));
        assert_eq!(a.adjoint().adjoint(), a);
        assert_eq!(a.adjoint().at(1, -2), a.at(-2, 1).conj());
    }

    #[test]
    fn mismatched_operands_rejected() {
        let a = OperatorMatrix::<f64>::identity(BasisWindow::new(1), eps());
        let b = OperatorMatrix::<f64>::identity(BasisWindow::new(2), eps());
        assert!(a.matmul(&b).is_err());
        let c = OperatorMatrix::<f64>::identity(BasisWindow::new(1), Epsilon::new(2.0).unwrap());
        assert_eq!(a.try_sub(&c).unwrap_err(), Error::Mismatch("epsilon"));
    }

    #[test]
    fn jacobi_on_known_spectrum() {
        // Pauli-y has eigenvalues ±1.
        let w = BasisWindow::new(0);
        let e = eps();
        let m = OperatorMatrix::from_fn(w, e, |_, _| Complex::new(3.0, 0.0));
        assert!((m.min_eigenvalue().unwrap() - 3.0).abs() < 1e-14);

        let w = BasisWindow::new(1);
        let y = OperatorMatrix::from_fn(w, e, |m, n| match (m, n) {
            (-1, 0) => Complex::new(0.0, -1.0),
            (0, -1) => Complex::new(0.0, 1.0),
            (1, 1) => Complex::new(5.0, 0.0),
            _ => zero(),
        });
        assert!((y.min_eigenvalue().unwrap() + 1.0).abs() < 1e-13);
    }

    #[test]
    fn jacobi_tridiagonal_against_closed_form() {
        // Tridiagonal Toeplitz [2, -1]: λ_k = 2 - 2 cos(kπ/(d+1)).
        let w = BasisWindow::new(4);
        let a = OperatorMatrix::from_fn(w, eps(), |m, n| match (m - n).abs() {
            0 => Complex::new(2.0, 0.0),
            1 => Complex::new(0.0, if m > n { -1.0 } else { 1.0 }),
            _ => zero(),
        });
        let d = w.size() as f64;
        let expected = 2.0 - 2.0 * (std::f64::consts::PI / (d + 1.0)).cos();
        assert!((a.min_eigenvalue().unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn nonhermitian_eigen_rejected() {
        let w = BasisWindow::new(1);
        let a = OperatorMatrix::from_fn(w, eps(), |m, n| if m == n + 1 { one() } else { zero() });
        assert!(a.min_eigenvalue().is_err());
    }
}

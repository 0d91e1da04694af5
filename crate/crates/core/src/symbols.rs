//! Lower (covariant) symbols `x ↦ <x|O|x>` on rectangular phase-space grids.

use num_complex::Complex;

use crate::coherent::{coherent_vector, CoherentVector};
use crate::error::{Error, Result};
use crate::matrix::{zero, OperatorMatrix};
use crate::phase_space::{BasisWindow, Epsilon, PhasePoint};
use crate::scalar::Real;

/// Tensor grid of β values × J values.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid<T> {
    betas: Vec<T>,
    js: Vec<T>,
}

impl<T: Real> PhaseGrid<T> {
    pub fn new(betas: Vec<T>, js: Vec<T>) -> Result<Self> {
        if betas.is_empty() || js.is_empty() {
            return Err(Error::InvalidArgument("phase grid needs at least one β and one J".into()));
        }
        if let Some(bad) = betas.iter().chain(&js).find(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "grid coordinate", value: bad.as_f64() });
        }
        Ok(Self { betas, js })
    }

    /// `count` evenly spaced values from `start` to `end` inclusive.
    pub fn linspace(start: T, end: T, count: usize) -> Vec<T> {
        match count {
            0 => Vec::new(),
            1 => vec![start],
            _ => {
                let step = (end - start) / T::from_int(count as i64 - 1);
                (0..count).map(|i| start + step * T::from_int(i as i64)).collect()
            }
        }
    }

    pub fn betas(&self) -> &[T] {
        &self.betas
    }

    pub fn js(&self) -> &[T] {
        &self.js
    }

    pub fn len(&self) -> usize {
        self.betas.len() * self.js.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_abs_j(&self) -> T {
        self.js.iter().map(|j| j.abs()).fold(T::zero(), T::max)
    }

    /// Points ordered β-major: all J for the first β, then the next β.
    pub fn points(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.betas.iter().flat_map(move |&b| self.js.iter().map(move |&j| (b, j)))
    }
}

/// Values of a lower symbol on a [`PhaseGrid`], in [`PhaseGrid::points`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolField<T> {
    pub grid: PhaseGrid<T>,
    pub values: Vec<Complex<T>>,
    pub eps: Epsilon<T>,
    pub source: String,
}

impl<T: Real> SymbolField<T> {
    pub fn iter(&self) -> impl Iterator<Item = ((T, T), Complex<T>)> + '_ {
        self.grid.points().zip(self.values.iter().copied())
    }

    pub fn max_imag(&self) -> T {
        self.values.iter().map(|v| v.im.abs()).fold(T::zero(), T::max)
    }
}

fn check_consistent<T: Real>(op: &OperatorMatrix<T>, window: BasisWindow) -> Result<()> {
    if op.window() != window {
        return Err(Error::Mismatch("basis window"));
    }
    Ok(())
}

/// `c† O c` for the coherent vector `c` at `x`.
pub fn expectation<T: Real>(op: &OperatorMatrix<T>, c: &CoherentVector<T>) -> Complex<T> {
    let d = op.dim();
    let entries = op.as_slice();
    let coeffs = c.coeffs();
    let mut acc = zero::<T>();
    for r in 0..d {
        let mut row = zero::<T>();
        for col in 0..d {
            row += entries[r * d + col] * coeffs[col];
        }
        acc += coeffs[r].conj() * row;
    }
    acc
}

/// `trace(O P_x)` with the explicit projector `P_x = c c†`.
pub fn expectation_trace<T: Real>(op: &OperatorMatrix<T>, c: &CoherentVector<T>) -> Complex<T> {
    let d = op.dim();
    let entries = op.as_slice();
    let coeffs = c.coeffs();
    let projector: Vec<Complex<T>> =
        (0..d * d).map(|i| coeffs[i / d] * coeffs[i % d].conj()).collect();
    let mut acc = zero::<T>();
    for col in 0..d {
        for r in 0..d {
            acc += entries[col * d + r] * projector[r * d + col];
        }
    }
    acc
}

/// Lower symbol of `op` sampled on `points`.
pub fn lower_symbol<T: Real>(
    op: &OperatorMatrix<T>,
    points: &PhaseGrid<T>,
    window: BasisWindow,
    source: impl Into<String>,
) -> Result<SymbolField<T>> {
    check_consistent(op, window)?;
    let eps = op.eps();
    let values = points
        .points()
        .map(|(b, j)| {
            let x = PhasePoint::new(b, j)?;
            Ok(expectation(op, &coherent_vector(&x, eps, window)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolField { grid: points.clone(), values, eps, source: source.into() })
}

/// Same field through the projector-trace route.
pub fn lower_symbol_trace<T: Real>(
    op: &OperatorMatrix<T>,
    points: &PhaseGrid<T>,
    window: BasisWindow,
    source: impl Into<String>,
) -> Result<SymbolField<T>> {
    check_consistent(op, window)?;
    let eps = op.eps();
    let values = points
        .points()
        .map(|(b, j)| {
            let x = PhasePoint::new(b, j)?;
            Ok(expectation_trace(op, &coherent_vector(&x, eps, window)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolField { grid: points.clone(), values, eps, source: source.into() })
}

//! Gauss–Hermite rules and the quadrature configuration shared by the
//! oracle and the verification routines.

use crate::error::{Error, Result};
use crate::phase_space::BasisWindow;
use crate::scalar::Real;

/// Largest node count accepted by [`gauss_hermite_rule`].
pub const MAX_GH_NODES: usize = 400;

/// Node count used when a configuration is built with [`QuadratureConfig::auto`].
pub const DEFAULT_GH_NODES: usize = 96;

/// Nodes and weights for `∫ g(t) e^{-t²} dt ≈ Σ w_i g(t_i)`, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermiteRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussHermiteRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn largest_node(&self) -> T {
        self.nodes.last().copied().unwrap_or_else(T::zero)
    }
}

/// Gauss–Hermite rule for the weight `e^{-t²}`.
///
/// Roots of `H_count` are found by Newton iteration on the orthonormal
/// Hermite recurrence, seeded with the usual asymptotic guesses and
/// deflating by symmetry.
pub fn gauss_hermite_rule<T: Real>(count: usize) -> Result<GaussHermiteRule<T>> {
    if count == 0 || count > MAX_GH_NODES {
        return Err(Error::NodeCount { requested: count, cap: MAX_GH_NODES });
    }
    const MAX_ITER: usize = 100;
    let n = count;
    let nf = T::from_int(n as i64);
    let pim4 = T::PI().powf(T::lit(-0.25));
    let two = T::lit(2.0);
    let tol = T::epsilon() * T::lit(8.0);

    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let half = n.div_ceil(2);
    let mut z = T::zero();

    for i in 0..half {
        z = match i {
            0 => (two * nf + T::one()).sqrt() - T::lit(1.85575) * (two * nf + T::one()).powf(T::lit(-1.0 / 6.0)),
            1 => z - T::lit(1.14) * nf.powf(T::lit(0.426)) / z,
            2 => T::lit(1.86) * z - T::lit(0.86) * nodes[n - 1],
            3 => T::lit(1.91) * z - T::lit(0.91) * nodes[n - 2],
            _ => two * z - nodes[n - i + 1],
        };
        let mut converged_once = false;
        for iter in 0..=MAX_ITER {
            if iter == MAX_ITER {
                return Err(Error::Convergence("Gauss-Hermite root finding"));
            }
            let (p, dp) = orthonormal_hermite(n, z, pim4);
            let step = p / dp;
            z -= step;
            if step.abs() <= tol * z.abs().max(T::one()) {
                // One extra step after the criterion trips.
                if converged_once {
                    break;
                }
                converged_once = true;
            }
        }
        let (_, dp) = orthonormal_hermite(n, z, pim4);
        let w = two / (dp * dp);
        // Largest roots first; store ascending.
        nodes[n - 1 - i] = z;
        nodes[i] = -z;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    Ok(GaussHermiteRule { nodes, weights })
}

/// Orthonormal Hermite function `p_n(z)` (without the Gaussian factor) and its
/// derivative.
fn orthonormal_hermite<T: Real>(n: usize, z: T, pim4: T) -> (T, T) {
    let two = T::lit(2.0);
    let mut p1 = pim4;
    let mut p2 = T::zero();
    for j in 1..=n {
        let jf = T::from_int(j as i64);
        let p3 = p2;
        p2 = p1;
        p1 = z * (two / jf).sqrt() * p2 - ((jf - T::one()) / jf).sqrt() * p3;
    }
    let dp = (two * T::from_int(n as i64)).sqrt() * p2;
    (p1, dp)
}

/// Quadrature settings: Gauss–Hermite in `J`, uniform trapezoid in `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig<T> {
    pub gh_nodes: usize,
    pub beta_points: usize,
    /// Bound on `|J|` used for reporting the neglected quadrature mass.
    pub j_max: T,
    pub tol: T,
}

impl<T: Real> QuadratureConfig<T> {
    pub fn new(gh_nodes: usize, beta_points: usize, j_max: T, tol: T) -> Result<Self> {
        if gh_nodes == 0 || gh_nodes > MAX_GH_NODES {
            return Err(Error::NodeCount { requested: gh_nodes, cap: MAX_GH_NODES });
        }
        if beta_points == 0 {
            return Err(Error::InvalidArgument("beta_points must be positive".into()));
        }
        if !(j_max.is_finite() && j_max > T::zero()) {
            return Err(Error::InvalidArgument(format!("J_max must be positive, got {j_max}")));
        }
        if !(tol.is_finite() && tol > T::zero()) {
            return Err(Error::InvalidTolerance { value: tol.as_f64(), constraint: "tol > 0" });
        }
        Ok(Self { gh_nodes, beta_points, j_max, tol })
    }

    /// Anti-aliasing-safe configuration for a window and maximum β-mode.
    pub fn auto(window: BasisWindow, bandwidth: u64, j_max: T, tol: T) -> Result<Self> {
        Self::new(DEFAULT_GH_NODES, anti_aliasing_points(window, bandwidth), j_max, tol)
    }

    /// Same settings with node and grid counts doubled.
    pub fn refined(&self) -> Result<Self> {
        Self::new((2 * self.gh_nodes).min(MAX_GH_NODES), 2 * self.beta_points, self.j_max, self.tol)
    }

    /// Errors when the β grid cannot resolve every mode for this window.
    pub fn check_beta_resolution(&self, window: BasisWindow, bandwidth: u64) -> Result<()> {
        let required = anti_aliasing_points(window, bandwidth);
        if self.beta_points < required {
            Err(Error::Aliasing { got: self.beta_points, required })
        } else {
            Ok(())
        }
    }
}

/// `2 (2N + K) + 1`.
pub fn anti_aliasing_points(window: BasisWindow, bandwidth: u64) -> usize {
    2 * (2 * window.n_max() + bandwidth as usize) + 1
}

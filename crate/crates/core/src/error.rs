use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("epsilon must be a positive finite number, got {0}")]
    InvalidEpsilon(f64),

    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("tolerance must satisfy {constraint}, got {value}")]
    InvalidTolerance { value: f64, constraint: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exponent {exponent} overflows the floating range in {context}")]
    Overflow { exponent: f64, context: &'static str },

    #[error("window n_max={n_max} too small: need n_max > {required}")]
    WindowTooSmall { n_max: usize, required: usize },

    #[error("operands disagree on {0}")]
    Mismatch(&'static str),

    #[error("index {index} outside window [-{n_max}, {n_max}]")]
    OutOfWindow { index: i64, n_max: usize },

    #[error("beta grid of {got} points aliases: anti-aliasing bound requires at least {required}")]
    Aliasing { got: usize, required: usize },

    #[error("J-growth e^({growth}|J|) too fast for {nodes} Gauss-Hermite nodes")]
    GrowthTooFast { growth: f64, nodes: usize },

    #[error("{0} did not converge")]
    Convergence(&'static str),

    #[error("Gauss-Hermite node count {requested} outside supported range 1..={cap}")]
    NodeCount { requested: usize, cap: usize },

    #[error("Hermite evaluation at n={n} left imaginary residue {residue}")]
    ImaginaryResidue { n: i64, residue: f64 },
}

impl Error {
    /// True for misuse (bad parameters), false for numerical failures.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidEpsilon(_)
                | Error::NonFinite { .. }
                | Error::InvalidTolerance { .. }
                | Error::InvalidArgument(_)
                | Error::WindowTooSmall { .. }
                | Error::Mismatch(_)
                | Error::OutOfWindow { .. }
                | Error::NodeCount { .. }
        )
    }
}

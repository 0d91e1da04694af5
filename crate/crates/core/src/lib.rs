//! Coherent-state quantization on the cylinder phase space `T*(S¹)`.
//!
//! The basis `Φ_n(β, J) = e^{-eps n²/2} e^{n(eps J + iβ)}`, `n ∈ ℤ`, is
//! orthonormal for `μ = sqrt(eps/π) (2π)^{-1} e^{-eps J²} dJ dβ`, and the
//! coherent states built from it quantize a classical observable `f` as
//! `O_f = ∫ f |x><x| N(J) μ(dx)`.
//!
//! Two independent routes to `O_f` are provided:
//!
//! * [`quantizer`]: the defining integral evaluated by Gauss–Hermite and
//!   trapezoid quadrature, for any observable with declared bandwidth.
//! * [`closed_forms`]: analytic matrices for `J^m`, `β`, and the monomials
//!   `(A*)^p A^q` with `A = e^{eps J + iβ}`, plus the ordered Laurent
//!   quantizer `Σ c_{pq} O_{A*^p} O_{A^q}`.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

pub mod basis;
pub mod closed_forms;
pub mod coherent;
pub mod error;
pub mod matrix;
pub mod phase_space;
pub mod quadrature;
pub mod quantizer;
pub mod scalar;
pub mod symbols;

pub use basis::{choose_window, normalization, orthonormality_defect, phi, DefectReport, NormalizationResult};
pub use closed_forms::{
    adjudicate_selection_rule, inverse_relation_check, laurent_entry, op_A_q, op_A_star_p, op_A_star_p_A_q, op_J_power, op_beta, quantize_laurent,
    verify_ordering, OrderingReport, SelectionRuleReport,
};
pub use coherent::{coherent_vector, overlap, resolution_defect, CoherentVector};
pub use error::{Error, Result};
pub use matrix::OperatorMatrix;
pub use phase_space::{
    classical_A, classical_A_star, eval_laurent, measure_weight, BasisWindow, Epsilon, LaurentCoefficients,
    PhasePoint,
};
pub use quadrature::{gauss_hermite_rule, GaussHermiteRule, QuadratureConfig};
pub use quantizer::{matrix_element, quantize, FourierObservable, JProfile, ObservableSpec, PointwiseObservable};
pub use scalar::Real;
pub use symbols::{lower_symbol, lower_symbol_trace, PhaseGrid, SymbolField};

pub type Complex64 = num_complex::Complex<f64>;
pub type Epsilon64 = Epsilon<f64>;
pub type PhasePoint64 = PhasePoint<f64>;
pub type Laurent64 = LaurentCoefficients<f64>;
pub type Operator64 = OperatorMatrix<f64>;
pub type Observable64 = ObservableSpec<f64>;
pub type Quadrature64 = QuadratureConfig<f64>;
pub type CoherentVector64 = CoherentVector<f64>;
pub type SymbolField64 = SymbolField<f64>;
pub type OrderingReport64 = OrderingReport<f64>;

//! Pass thresholds for every verification suite.

/// Ordering identity, interior entries, scaled by `max(1, |reference|)`.
pub const ORDERING: f64 = 1e-12;

/// Inverse relation `O_{A^-1} O_A = Id` on the interior.
pub const INVERSE: f64 = 1e-12;

/// Gram / resolution-of-identity defect.
pub const RESOLUTION: f64 = 1e-10;

/// Resolution path against the Gram path, entrywise.
pub const RESOLUTION_VS_GRAM: f64 = 1e-12;

/// Closed form against quadrature, scaled entrywise.
pub const ORACLE: f64 = 1e-9;

/// Quadrature tolerance carried in the quadrature configuration.
pub const QUADRATURE: f64 = 1e-10;

/// Oracle against the `q - p` band of `O_{A*^p A^q}`.
pub const SELECTION_BAND: f64 = 1e-10;

/// Relative mismatch above which the `p + q` rule counts as refuted.
pub const SELECTION_REFUTED: f64 = 0.5;

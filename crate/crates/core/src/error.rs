use thiserror::Error;

/// Errors produced by the curvature toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree {p} is out of range for dimension {n} ({context})")]
    GradeOutOfRange { p: usize, n: usize, context: &'static str },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation `{op}` is not supported in dimension {n}")]
    UnsupportedDimension { op: &'static str, n: usize },

    #[error("polynomial is not homogeneous of degree {expected}")]
    NonHomogeneous { expected: usize },

    #[error("polynomial is not harmonic (residual {residual:.3e})")]
    NotHarmonic { residual: f64 },

    #[error("vectors of the two-plane are not orthonormal (defect {defect:.3e})")]
    NotOrthonormal { defect: f64 },

    #[error("Kulkarni–Nomizu factors belong to different algebras")]
    MixedAlgebras,

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("consistency check `{check}` failed: residual {residual:.3e} exceeds {tolerance:.1e}")]
    Consistency {
        check: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("negative virtual multiplicity {count} for {target}")]
    NegativeMultiplicity { target: &'static str, count: i64 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Returns `Err(Error::Consistency)` when `residual` exceeds `tolerance`.
pub(crate) fn ensure_within(check: &'static str, residual: f64, tolerance: f64) -> Result<()> {
    if residual.is_finite() && residual <= tolerance {
        Ok(())
    } else {
        Err(Error::Consistency {
            check,
            residual,
            tolerance,
        })
    }
}

use thiserror::Error;

use crate::algebra::FockState;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("charge weights must be positive integers, got s={s}, p={p}")]
    InvalidCharge { s: i64, p: i64 },

    #[error("Hamiltonian does not commute with K = {s}·N1 + {p}·N2")]
    NonConservingHamiltonian { s: u64, p: u64 },

    #[error("block closure violated: H maps the basis onto {0:?}, outside the block")]
    BlockClosureViolation(FockState),

    #[error("eigen residual {residual:e} exceeds tolerance {tol:e}")]
    NumericalFailure { residual: f64, tol: f64 },

    #[error("eigen residual requested for a zero vector")]
    ZeroVector,

    #[error("term {0:?} raises and lowers mode 2 at once; use the matrix-element route")]
    UnsupportedTermShape([u32; 4]),

    #[error("reduced block has no scalar recurrence: {0}")]
    BandStructureUnsupported(String),

    #[error("monomial degree {0} lies outside the physical sector of the block")]
    DegreeOutsidePhysicalSector(u64),

    #[error("harmonic order must be at least 1, got {0}")]
    InvalidOrder(u32),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("grid refinement changed level {level} by {change:e} (> {tol:e})")]
    GridTooCoarse { level: usize, change: f64, tol: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("gauge identity fails under every convention; best residual {best:e}")]
    ConventionMismatch {
        best: f64,
        tried: Vec<(String, f64)>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

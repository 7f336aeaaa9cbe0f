use thiserror::Error;

/// Errors reported by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Schatten exponent {0}: must lie in [1, inf]")]
    InvalidExponent(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal mass {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("invalid spectral data: {0}")]
    InvalidSpectralData(String),

    #[error("not a contraction: operator norm {0}")]
    NotContraction(f64),

    #[error("infeasible perturbation norm {requested}: largest feasible value is {largest_feasible}")]
    InfeasibleTarget { requested: f64, largest_feasible: f64 },

    #[error("excluded node coincidence: {0}")]
    NodeCoincidence(String),

    #[error("symbol evaluated to a non-finite value at {0}")]
    NonFiniteSymbol(String),

    #[error("evaluation budget exceeded: {groups} spectral groups at arity {arity} (cap {cap})")]
    BudgetExceeded { groups: usize, arity: usize, cap: usize },

    #[error("overlapping regions: tuple {0:?} belongs to both")]
    OverlappingRegions(Vec<usize>),

    #[error("unordered spectral data: {0}")]
    Unordered(String),

    #[error("truncation K={given} too small for degree {degree} at order {order}: need K >= {required}")]
    InsufficientTruncation { given: usize, degree: usize, order: usize, required: usize },

    #[error("pairing convention fault: closed form and quadrature differ by {0:e}")]
    ConventionFault(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

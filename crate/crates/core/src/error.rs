use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid Coxeter datum: {0}")]
    InvalidDatum(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("vector lies on the zero-sum hyperplane (coordinate sum {sum:e})")]
    OnZeroHyperplane { sum: f64 },

    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("tangent configuration, B(x,y) = {0} is within tolerance of 1")]
    Degenerate(f64),

    #[error("roots are not comparable under dominance (B(x,y) = {0})")]
    NotComparable(f64),

    #[error("base root is not present in the root table")]
    BaseNotInTable,

    #[error("pair does not generate an infinite dihedral group (B(a,b) = {0})")]
    NotInfiniteDihedral(f64),

    #[error("operation requires a hyperbolic (non-affine) pair")]
    AffinePair,

    #[error("degenerate seed: B(a,c) and B(b,c) both vanish")]
    DegenerateSeed,

    #[error("iteration did not converge after {0} steps")]
    NoConvergence(usize),

    #[error("selection is empty: no roots of depth >= {0}")]
    EmptySelection(usize),

    #[error("identical points do not determine a line")]
    IdenticalPoints,

    #[error("word leaves the chart D: intermediate coordinate sum {sum:e}")]
    LeavesChartD { sum: f64 },

    #[error("point is not isotropic (|q| = {0:e})")]
    NotIsotropic(f64),

    #[error("root table contains no hyperbolic pairs")]
    NoHyperbolicPairs,
}

use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("degenerate edge: endpoints coincide")]
    DegenerateEdge,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vertices do not span a full-dimensional simplex")]
    DegenerateSimplex,
    #[error("vertex index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("modulus {k} outside the valid range 2..={max}")]
    ModulusOutOfRange { k: u32, max: String },
    #[error("translation moves the dilation outside the parent simplex")]
    InvalidTranslation,
    #[error("dilation vertex {0} lies outside the parent simplex")]
    VertexOutsideParent(String),
    #[error("pairwise vertex differences are not divisible by modulus {0}")]
    NotADilation(u32),
    #[error("enumeration budget exceeded: {candidates} candidate cells > cap {cap}")]
    EnumerationBudget { candidates: u128, cap: u64 },
    #[error("branch budget exceeded: more than {0} branch systems")]
    BranchBudget(usize),
    #[error("closure budget exceeded: {points} lattice points > cap {cap}")]
    ClosureBudget { points: usize, cap: usize },
    #[error("a cover must contain at least one dilation")]
    EmptyCover,
    #[error("cover dilation was built against a different parent simplex")]
    ParentMismatch,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("case classification failed: {0}")]
    Classification(String),
    #[error("constructed cover failed certification; uncovered witness {witness}")]
    CertificationFailed { witness: String },
    #[error("covered simplex is not integrally closed at r={r}: point {point}")]
    ClosureContradiction { r: u32, point: String },
    #[error("invalid input file: {0}")]
    InvalidFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("root-of-unity order must be at least 2, got {0}")]
    InvalidOrder(u32),
    #[error("unrecognised ring mode `{0}` (expected free, root:N or prim:N)")]
    InvalidRingMode(String),
    #[error("q[{0},{0}] is not a ring symbol; diagonal values belong to a q-matrix")]
    DiagonalPairSymbol(u32),
    #[error("`{0}` is not invertible")]
    NotInvertible(String),
    #[error("permutation rank must be positive")]
    ZeroRank,
    #[error("{0:?} is not a permutation of 1..={1}")]
    InvalidPermutation(Vec<u32>, usize),
    #[error("matrix entries mix grades {0} and {1}")]
    GradeMixing(u32, u32),
    #[error("expression is not homogeneous: grades {0} and {1}")]
    Inhomogeneous(u32, u32),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("the q-cyclic trace needs a root-of-unity ring mode")]
    CyclicTraceInFreeMode,
    #[error("invalid q-matrix: {0}")]
    InvalidQMatrix(String),
    #[error("invalid tensor: {0}")]
    InvalidTensor(String),
    #[error("kernel is singular (condition estimate {condition:e}, residual {residual:e})")]
    Singular { condition: f64, residual: f64 },
    #[error("invalid momentum: {0}")]
    InvalidMomentum(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

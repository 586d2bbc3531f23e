use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("category cannot be checked exhaustively: {0}")]
    NonEnumerable(String),
    #[error("missing capability: {0}")]
    CapabilityMissing(&'static str),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("ill-typed input: {0}")]
    IllTyped(String),
    #[error("structure maps were built for a different functor: {0}")]
    FunctorMismatch(String),
    #[error("resolution is not invertible: {0}")]
    ResolutionNotInvertible(String),
    #[error("chain did not stabilize within {stages} stages (sizes {sizes:?})")]
    NotStabilized { stages: usize, sizes: Vec<usize> },
    #[error("unit component at the colimit is not invertible: {0}")]
    UnitNotInvertible(String),
    #[error("comparison map at the colimit is not invertible: {0}")]
    ComparisonNotIso(String),
    #[error("transfer function is not monotone: {0}")]
    NonMonotone(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

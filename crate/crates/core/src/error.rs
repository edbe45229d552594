use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: rank {left} against rank {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("not a lattice element: {0}")]
    NotInLattice(String),

    #[error("invalid building data: {0}")]
    InvalidBuildingData(String),

    #[error("unknown configuration: {0}")]
    UnknownConfig(String),

    #[error("generator table inconsistent: {0}")]
    InconsistentTable(String),

    #[error("class is not in the image of the generators: {0}")]
    NotRepresentable(String),

    #[error("divisor has an odd exceptional coefficient: {0}")]
    NotLiftable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("trusted class received a certificate: {0}")]
    TrustViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

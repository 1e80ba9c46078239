use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice size L={size} for {family}: {reason}")]
    InvalidSize {
        family: String,
        size: usize,
        reason: String,
    },
    #[error("unknown lattice family `{0}`")]
    UnknownFamily(String),
    #[error("malformed lattice: {0}")]
    MalformedLattice(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("system too large: {0}")]
    TooLarge(String),
    #[error("no perfect matching exists on the candidate graph")]
    NoPerfectMatching,
    #[error("no crossing found: {0}")]
    NoCrossing(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

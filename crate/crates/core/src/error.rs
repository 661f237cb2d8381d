use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{value} is not a {base}-adic integer")]
    NotIntegral { value: String, base: u64 },
    #[error("truncation has depth 0")]
    ZeroDepth,
    #[error("truncation depth {depth} is below frequency level {level}")]
    TooShallow { depth: usize, level: u32 },
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("{ell} does not divide {p}")]
    NotDivisor { ell: u64, p: u64 },
    #[error("base mismatch: expected {expected}, found {found}")]
    BaseMismatch { expected: u64, found: u64 },
    #[error("expected {expected} branches, found {found}")]
    BranchCount { expected: usize, found: usize },
    #[error("branch {branch} has zero multiplier")]
    ZeroMultiplier { branch: usize },
    #[error("branch {branch} maps z = {witness} (its own residue class) outside Z")]
    NonIntegralImage { branch: usize, witness: i64 },
    #[error("initial condition {0} does not satisfy (1 - r_0) z = c_0")]
    InvalidInitialCondition(String),
    #[error("map is not proper (r_0 = 1) and no initial condition was supplied")]
    NotProper,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no place makes M_H of the period contract")]
    NoContractingPlace,
    #[error("1 - M_H(period) vanishes")]
    DegenerateCycle,
    #[error("singular linear system at frequency level {level}")]
    SingularSystem { level: u32 },
    #[error("enumeration of {points} points exceeds the limit of {limit}")]
    ResourceGuard { points: u128, limit: u128 },
    #[error("not a cycle of the map: {0}")]
    NotACycle(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("map spec error at {field}: {message}")]
    MapSpec { field: String, message: String },
    #[error("internal self-check failed: {0}")]
    SelfCheck(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
}

/// Coarse grouping used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Spec,
    Precondition,
    Resource,
    Other,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_)
            | Error::MapSpec { .. }
            | Error::BranchCount { .. }
            | Error::ZeroMultiplier { .. }
            | Error::NonIntegralImage { .. }
            | Error::InvalidInitialCondition(_) => ErrorKind::Spec,
            Error::Precondition(_)
            | Error::NotProper
            | Error::NoContractingPlace
            | Error::DegenerateCycle
            | Error::NotIntegral { .. } => ErrorKind::Precondition,
            Error::ResourceGuard { .. } => ErrorKind::Resource,
            _ => ErrorKind::Other,
        }
    }
}

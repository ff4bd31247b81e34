use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field order {p}^{f} exceeds the cap {cap}")]
    FieldTooLarge { p: u64, f: u32, cap: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("q = {0} is below the supported minimum of 4")]
    FieldTooSmall(u32),
    #[error("inversion of zero in GF({0})")]
    DivisionByZero(u32),
    #[error("{e} does not divide the extension degree {f}")]
    NotASubfield { e: u32, f: u32 },
    #[error("invalid field element: {0}")]
    InvalidElement(String),
    #[error("matrix does not have determinant 1")]
    DeterminantNotOne,
    #[error("matrix is singular")]
    Singular,
    #[error("elements over GF({0}) and GF({1}) cannot be combined")]
    MixedContexts(u32, u32),
    #[error("q = {q} exceeds the oracle cap {cap}")]
    OracleCap { q: u32, cap: u32 },
    #[error("graph would have {needed} vertices, cap is {cap}")]
    VertexCap { needed: u128, cap: usize },
    #[error("exact solver limited to {cap} vertices, graph has {vertices}")]
    SolverCap { vertices: usize, cap: usize },
    #[error("power t = {t} exceeds beta = {beta}")]
    PowerTooLarge { t: usize, beta: usize },
    #[error("the table of invariably generating pairs is empty")]
    EmptyPsi2,
    #[error("beta = {0} is odd")]
    OddBeta(u64),
    #[error("beta must be at least 2")]
    BetaTooSmall,
    #[error("2-covering check failed for q = {0}")]
    CoveringFailed(u32),
    #[error("subgroup representative construction failed: {0}")]
    SubgroupConstruction(String),
    #[error("invalid class label `{0}`")]
    ParseLabel(String),
    #[error("pair table is not invariant: {0}")]
    NotInvariant(String),
    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// Process exit status: 2 for bad input, 3 for a resource cap, 1 for
    /// anything that signals a failed check.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotPrime(_)
            | Error::ZeroDegree
            | Error::NotPrimePower(_)
            | Error::FieldTooSmall(_)
            | Error::NotASubfield { .. }
            | Error::InvalidElement(_)
            | Error::ParseLabel(_)
            | Error::PowerTooLarge { .. }
            | Error::Usage(_) => 2,
            Error::FieldTooLarge { .. }
            | Error::OracleCap { .. }
            | Error::VertexCap { .. }
            | Error::SolverCap { .. } => 3,
            _ => 1,
        }
    }
}

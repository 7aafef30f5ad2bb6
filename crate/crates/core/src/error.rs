use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {p} is outside the supported range {min}..={max}")]
    PrimeOutOfRange { p: u64, min: u64, max: u64 },

    #[error("{value} is a quadratic residue mod {p}, expected a non-residue")]
    NotNonResidue { value: u32, p: u32 },

    #[error("zero has no quadratic character")]
    ZeroResidue,

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("matrix is singular mod {0}")]
    Singular(u32),

    #[error("generator list is empty")]
    NoGenerators,

    #[error("subgroup {label} exceeds the element cap of {cap}")]
    CapExceeded { label: String, cap: usize },

    #[error("{p} ∈ I_Q(1): rational isogenies of this degree exist, so no degree bound applies")]
    InBaseSet { p: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

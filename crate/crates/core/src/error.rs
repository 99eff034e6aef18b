use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("prime {0} is not usable for this reduction")]
    BadPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("not divisible")]
    NotDivisible,
    #[error("the zero polynomial has infinite multiplicity")]
    InfiniteMultiplicity,
    #[error("polynomials share a common factor")]
    CommonFactor,
    #[error("generators close at more than {0} elements")]
    BadGenerators(usize),
    #[error("not a pseudoreflection")]
    NotPseudoreflection,
    #[error("point lies in the base locus of the quotient map")]
    BaseLocus,
    #[error("not in the invariant subalgebra: {0}")]
    NotInSubalgebra(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T> = std::result::Result<T, Error>;

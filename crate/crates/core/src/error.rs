use thiserror::Error;

/// Errors raised by every layer of the crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("quotient is infinite-dimensional")]
    InfiniteDimension,
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("malformed relation: {0}")]
    MalformedRelation(String),
    #[error("relation not preserved: {0}")]
    RelationNotPreserved(String),
    #[error("base rings are incompatible: {0}")]
    BaseIncompatible(String),
    #[error("image of `{0}` is not contained in the target ideal")]
    ImageNotContained(String),
    #[error("incompatible multiplicative sets: {0}")]
    IncompatibleMultiplicative(String),
    #[error("unsupported fiber: {0}")]
    UnsupportedFiber(String),
    #[error("unsupported source: {0}")]
    UnsupportedSource(String),
    #[error("ideal is not proper")]
    ImproperIdeal,
    #[error("ideal is not prime: {0}")]
    NotPrime(String),
    #[error("morphism is not PSI at the prime {0}")]
    NotPsiAtPrime(String),
    #[error("not a common ideal: {0}")]
    NotCommonIdeal(String),
    #[error("quotient is not finite: {0}")]
    NotFiniteQuotient(String),
    #[error("invalid quadratic parameter d = {0}: {1}")]
    InvalidD(i64, String),
    #[error("finite ring too large: {size} elements exceeds bound {bound}")]
    TooLarge { size: u128, bound: usize },
    #[error("table is not a ring: {0}")]
    NotARing(String),
    #[error("map is not a ring morphism: {0}")]
    NotAMorphism(String),
    #[error("fact is meaningless for this atom: {0}")]
    MeaninglessFact(String),
    #[error("ill-typed expression: {0}")]
    IllTypedExpression(String),
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;

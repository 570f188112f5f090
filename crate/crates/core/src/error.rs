use thiserror::Error;

/// Errors raised by the workbench. Property failures are never errors; they
/// are reported through `PropertyReport`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameter value must be nonzero")]
    ZeroParameter,
    #[error("scalar {0} is not invertible")]
    NotInvertible(String),
    #[error("ill-defined product: recession cones meet along {witness:?}")]
    IllDefinedProduct { witness: Vec<i64> },
    #[error("unbounded enumeration while extracting coefficient at {0:?}")]
    Unbounded(Vec<i64>),
    #[error("variable set mismatch: {0}")]
    VariableMismatch(String),
    #[error("too many variables: {0} (maximum {1})")]
    TooManyVariables(usize, usize),
    #[error("truncation overflow: weight {needed} exceeds cutoff {cutoff} in {context}")]
    TruncationOverflow { needed: i64, cutoff: i64, context: String },
    #[error("loop element has a disallowed denominator {0}")]
    WrongLocalization(String),
    #[error("algebra is not associative: ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("algebra is not commutative: ({0}, {1})")]
    NotCommutative(String, String),
    #[error("algebra has no unit")]
    NoUnit,
    #[error("not a module: {0}")]
    NotAModule(String),
    #[error("unsupported instance: {0}")]
    UnsupportedInstance(String),
    #[error("unsupported spectrum: {0}")]
    UnsupportedSpectrum(String),
    #[error("closure escaped the representable bound via {0}")]
    CutoffExceeded(String),
    #[error("no factorization: {0}")]
    NoFactorization(String),
    #[error("factorization is not unique: {0}")]
    NonUniqueFactorization(String),
    #[error("unknown property {0}")]
    UnknownProperty(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

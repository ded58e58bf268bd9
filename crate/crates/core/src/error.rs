use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("inversion of zero")]
    ZeroInversion,

    #[error("cyclic substitution through indeterminate `{0}`")]
    CyclicSubstitution(String),

    #[error("generator context mismatch: {0}")]
    ContextMismatch(String),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid field specification: {0}")]
    Field(String),

    #[error("invalid variety presentation: {0}")]
    Variety(String),

    #[error("identity arity {arity} exceeds the {gens} available generators")]
    Arity { arity: usize, gens: usize },

    #[error("operation requires {0}")]
    Precondition(String),

    #[error("scaling lemma does not apply: {0}")]
    WrongVariety(String),

    #[error("verbal system fails Op2: {0}")]
    Op2Failure(String),

    #[error("endomorphism #{index} violates the kernel precondition: {reason}")]
    EndomorphismRejected { index: usize, reason: String },

    #[error("branch {0} is stuck; refusing to certify")]
    StuckBranch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("alphabet mismatch: `{0}` vs `{1}`")]
    AlphabetMismatch(String, String),
    #[error("duplicate relator name `{0}`")]
    DuplicateRelator(String),
    #[error("relator `{0}` is empty")]
    EmptyRelator(String),
    #[error("strand count must be at least {min}, got {got}")]
    StrandCount { min: usize, got: usize },
    #[error("index out of range: {0}")]
    IndexRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("coset cap exceeded: {cap} cosets allocated, {live} live, {defined} defined")]
    CosetCap { cap: usize, live: usize, defined: usize },
    #[error("enumeration produced order {got}, expected {expected}")]
    UnexpectedOrder { got: usize, expected: usize },
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("subgroup is not normal: conjugate of element {element} by {by} escapes")]
    NotNormal { element: usize, by: usize },
    #[error("group order {0} exceeds automorphism search bound {1}")]
    AutBound(usize, usize),
    #[error("universal-property square fails on basis generator `{0}`")]
    SquareCondition(String),
    #[error("sequence `{0}` is not an identity, and no single-change repair fixes it")]
    Unrepairable(String),
    #[error("handle reduction step budget {0} exceeded; this indicates a bug")]
    StepBudget(usize),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

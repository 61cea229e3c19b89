use thiserror::Error;

/// Errors raised while building or combining the finite structures of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown identifier `{0}`")]
    UnknownId(String),
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("missing composite for composable pair ({0}, {1})")]
    MissingComposite(String, String),
    #[error("composite given for non-composable pair ({0}, {1})")]
    NotComposable(String, String),
    #[error("composite ({0}, {1}) has the wrong endpoints")]
    BadEndpoints(String, String),
    #[error("associativity fails on ({0}, {1}, {2})")]
    AssociativityViolation(String, String, String),
    #[error("object `{0}` has no unique identity morphism")]
    NonUniqueIdentity(String),
    #[error("morphism `{0}` has no inverse")]
    MissingInverse(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("empty set")]
    EmptySet,
    #[error("groupoid is not skeletal")]
    NotSkeletal,
    #[error("unknown group shorthand `{0}`")]
    UnknownGroup(String),
    #[error("profunctor action violation: {0}")]
    ActionViolation(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("stage mismatch: {0}")]
    StageMismatch(String),
    #[error("naturality fails: {0}")]
    NaturalityViolation(String),
    #[error("horizontal composite is representative dependent: {0}")]
    WellDefinednessFailure(String),
    #[error("verification failed: {0}")]
    VerificationFailure(String),
    #[error("enumeration would visit {0} candidates, above the cap of {1}")]
    CapExceeded(u128, u128),
    #[error("group is not abelian")]
    NonAbelian,
    #[error("state vector is not normalized (norm {0})")]
    Unnormalized(f64),
    #[error("invalid element `{0}`")]
    InvalidElement(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate element id `{0}`")]
    DuplicateId(String),

    #[error("unknown element id `{0}`")]
    UnknownId(String),

    #[error("order relation identifies distinct elements `{0}` and `{1}`")]
    AntisymmetryViolation(String, String),

    #[error("relation is not a partial order: {0}")]
    NotAnOrder(String),

    #[error("set is not an inhabited directed downset")]
    NotDirected,

    #[error("invalid sieve on `{root}`: {reason}")]
    InvalidSieve { root: String, reason: String },

    #[error("cover family member `{member}` is not below its root `{root}`")]
    CoverNotBelowRoot { root: String, member: String },

    #[error("invalid block structure: {0}")]
    InvalidBlocks(String),

    /// Two blocks disagree about an element they share, e.g. the same atom
    /// set has different complements in two blocks.
    #[error("inconsistent identification of `{first}` and `{second}`: {reason}")]
    InconsistentIdentification {
        first: String,
        second: String,
        reason: String,
    },

    #[error("invalid context poset: {0}")]
    InvalidContexts(String),

    #[error("element {element} is not in context `{context}`")]
    ElementNotInContext { context: String, element: String },

    #[error("not a subpresheaf at `{at}`: {reason}")]
    NotSubpresheaf { at: String, reason: String },

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("invalid presheaf: {0}")]
    InvalidPresheaf(String),

    #[error("context poset has no shared universe of atoms")]
    RequiresBlockRepresentation,

    #[error("enumeration exceeded the limit of {0} results")]
    LimitExceeded(usize),
}

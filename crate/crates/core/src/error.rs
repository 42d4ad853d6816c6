use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("cone predicates do not partition at `{element}`: {detail}")]
    ConePartition { element: String, detail: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("invalid group model: {0}")]
    InvalidGroup(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("nontrivial stabilizer: `{0}` fixes the base point")]
    Stabilizer(String),

    #[error("spec error: {0}")]
    Spec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

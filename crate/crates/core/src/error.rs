use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("element index {0} is not in the carrier")]
    ForeignElement(usize),

    #[error("argument sets must be nonempty subsets of the carrier")]
    EmptyArgument,

    #[error("{t} arguments is not of the form l*({arity}-1)+1")]
    IteratedArity { t: usize, arity: usize },

    #[error("the structure has no scalar identity")]
    NoScalarIdentity,

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("incomplete table: {table} has no entry for ({multiset})")]
    IncompleteTable { table: &'static str, multiset: String },

    #[error("empty value set for f({0})")]
    EmptyValue(String),

    #[error("conflicting entries for {table}({multiset})")]
    ConflictingEntry { table: &'static str, multiset: String },

    #[error("unknown element label {0:?}")]
    UnknownLabel(String),

    #[error("structure {name:?} fails the Krasner axioms: {detail}")]
    NotKrasner { name: String, detail: String },

    #[error("the hyperideal equals the whole carrier")]
    Improper,

    #[error("{set} is not a hyperideal: {detail}")]
    NotAHyperideal { set: String, detail: String },

    #[error("{what} of {size} exceeds the configured cap of {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },

    #[error("invalid expansion function {name:?}: {detail}")]
    InvalidExpansion { name: String, detail: String },

    #[error("unknown expansion function {0:?}")]
    UnknownExpansion(String),

    #[error("unknown theorem id {0:?}")]
    UnknownTheorem(String),

    #[error("cannot parse implication {0:?}")]
    BadImplication(String),

    #[error("the map is not a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("quotient is ill-defined: {0}")]
    IllDefinedQuotient(String),

    #[error("k must be at least 2, got {0}")]
    DegenerateK(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

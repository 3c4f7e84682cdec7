use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),

    #[error("variable order mismatch: {0}")]
    VariableOrder(String),

    #[error("invalid signature: {0}")]
    Signature(String),

    #[error("invalid word: {0}")]
    Word(String),

    #[error("free variable `{0}` is not assigned")]
    Unassigned(String),

    #[error("free second-order variable `{0}` cannot be compiled")]
    FreeSecondOrder(String),

    #[error("free first-order variable `{0}` is not among the marked variables")]
    UnmarkedVariable(String),

    #[error("resource limit exceeded: {what} (limit {limit}) while processing `{context}`")]
    ResourceLimit {
        what: &'static str,
        limit: usize,
        context: String,
    },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("letter {0} is outside the alphabet")]
    LetterOutOfRange(u32),

    #[error("element {0} does not belong to this monoid")]
    ForeignElement(usize),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("index {index} out of range 1..={arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("arity mismatch: {0}")]
    Arity(String),

    #[error("not pumpable: {0}")]
    NotPumpable(String),

    #[error("component `{component}` needs dimension {minimal}, requested {requested}")]
    DimensionTooSmall {
        component: String,
        minimal: usize,
        requested: usize,
    },

    #[error("interpretation spec: line {line}: {msg}")]
    SpecFile { line: usize, msg: String },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

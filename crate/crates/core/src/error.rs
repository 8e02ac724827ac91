use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError { line, col, msg: msg.into() }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TypeError {
    #[error("type mismatch in `{term}`: expected {expected}, found {actual}")]
    Mismatch { expected: String, actual: String, term: String },
    #[error("unknown variable `{0}`")]
    UnknownVar(String),
    #[error("unknown constructor `{0}`")]
    UnknownCtor(String),
    #[error("unknown datatype `{0}`")]
    UnknownDatatype(String),
    #[error("cannot infer a type for `{0}`; add an annotation")]
    NeedsAnnotation(String),
    #[error("ill-formed `{term}`: {reason}")]
    Malformed { term: String, reason: String },
    #[error("in definition `{def}`: {inner}")]
    InDef { def: String, inner: Box<TypeError> },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("evaluation fuel exhausted after {0} rule applications (internal invariant failure)")]
    FuelExhausted(u64),
    #[error("stuck term `{term}`: {reason}")]
    Stuck { term: String, reason: String },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("model config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("unknown datatype `{0}` in model config")]
    UnknownDatatype(String),
    #[error("model `{model}` cannot be used for `{datatype}`: {reason}")]
    Unsupported { datatype: String, model: String, reason: String },
    #[error("cannot enumerate unfoldings of `{datatype}` at constructor `{ctor}`: {reason}")]
    InfiniteEnumeration { datatype: String, ctor: String, reason: String },
    #[error("bound {0} has an infinite component")]
    InfiniteBound(String),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum InterpError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unbound variable `{0}` during interpretation")]
    Unbound(String),
    #[error("ill-typed complexity term: {0}")]
    IllTyped(String),
    #[error("ordinal size models are not interpretable (datatype `{0}`)")]
    Ordinal(String),
    #[error("semrec requested for `{datatype}`: {reason}")]
    SemrecShape { datatype: String, reason: String },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("normalization fuel exhausted after {0} steps (input is not a translation?)")]
    FuelExhausted(u64),
    #[error("ill-typed complexity term: {0}")]
    IllTyped(String),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("cannot generate values of type {0}: {1}")]
    NotGenerable(String, String),
}

/// Top-level error for operations that span several stages.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("ill-formed signature: {}", .0.join("; "))]
    Signature(Vec<String>),
    #[error("type error: {0}")]
    Type(#[from] TypeError),
    #[error("evaluation error: {0}")]
    Eval(#[from] EvalError),
    #[error("{0}")]
    Model(#[from] ModelError),
    #[error("{0}")]
    Interp(#[from] InterpError),
    #[error("{0}")]
    Normalize(#[from] NormalizeError),
    #[error("{0}")]
    Gen(#[from] GenError),
    #[error("{0}")]
    Other(String),
}

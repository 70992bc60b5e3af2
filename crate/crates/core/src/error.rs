use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown tuple id {0}")]
    UnknownTupleId(String),
    #[error("unknown relation {0}")]
    UnknownRelation(String),
    #[error("relation {rel} has no attribute {attr}")]
    UnknownAttribute { rel: String, attr: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("{rel} expects {expected} values, got {found}")]
    ArityMismatch {
        rel: String,
        expected: usize,
        found: usize,
    },
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("duplicate tuple {0} (instances have set semantics)")]
    DuplicateTuple(String),
    #[error("invalid functional dependency: {0}")]
    InvalidFd(String),

    #[error("priority is not asymmetric: both {0} < {1} and {1} < {0}")]
    AsymmetryViolation(String, String),
    #[error("priority pair {0} < {1} is not a conflicting pair")]
    NonConflictingPair(String, String),
    #[error("priority is cyclic")]
    CyclicPriority,
    #[error("priority does not orient every conflict")]
    PriorityNotTotal,
    #[error("candidate is not a repair: {0}")]
    NotARepair(String),
    #[error("budget exceeded: {0}")]
    InstanceTooLarge(String),

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("free variable {0} in query (only closed queries are supported)")]
    FreeVariable(String),

    #[error("malformed formula: {0}")]
    MalformedFormula(String),
    #[error("formula has {found} variables, brute force is capped at {cap}")]
    TooManyVariables { found: usize, cap: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownTupleId(_) => "UnknownTupleId",
            Error::UnknownRelation(_) => "UnknownRelation",
            Error::UnknownAttribute { .. } => "UnknownAttribute",
            Error::Schema(_) => "SchemaError",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::TypeMismatch(_) => "TypeMismatch",
            Error::DuplicateTuple(_) => "DuplicateTuple",
            Error::InvalidFd(_) => "InvalidFd",
            Error::AsymmetryViolation(..) => "AsymmetryViolation",
            Error::NonConflictingPair(..) => "NonConflictingPair",
            Error::CyclicPriority => "CyclicPriority",
            Error::PriorityNotTotal => "PriorityNotTotal",
            Error::NotARepair(_) => "NotARepair",
            Error::InstanceTooLarge(_) => "InstanceTooLarge",
            Error::Syntax { .. } => "SyntaxError",
            Error::FreeVariable(_) => "FreeVariable",
            Error::MalformedFormula(_) => "MalformedFormula",
            Error::TooManyVariables { .. } => "TooManyVariables",
            Error::Io { .. } => "IoError",
            Error::Csv { .. } => "CsvError",
        }
    }

    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}

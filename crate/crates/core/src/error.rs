use thiserror::Error;

/// Errors raised by the estimators and parsers in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown system kind `{0}`")]
    UnknownKind(String),

    #[error("parameter `{name}` out of domain: {msg}")]
    Domain { name: String, msg: String },

    #[error("missing parameter `{name}` for `{kind}`")]
    MissingParam { kind: String, name: String },

    #[error("invalid Toeplitz word: {0}")]
    Toeplitz(String),

    #[error("word is periodic; amorphic complexity is zero and the closed form does not apply")]
    PeriodicWord,

    #[error("requested accuracy {requested:e} is finer than the table resolution {resolution:e}")]
    AccuracyUnreachable { requested: f64, resolution: f64 },

    #[error("exact search supports at most {cap} points, got {got}")]
    SizeCap { cap: usize, got: usize },

    #[error("budget exceeded: {cells} pair-steps requested, cap is {cap}")]
    Budget { cells: u128, cap: u128 },

    #[error("inclusion Per({p}) \u{2286} Per({q}) fails at residue {residue} within window {window}")]
    InclusionViolated { p: u64, q: u64, residue: u64, window: u64 },

    #[error("constant validation failed: {0}")]
    Constants(String),

    #[error("invalid plan: {0}")]
    Plan(String),

    #[error("not enough usable points for a fit: {0}")]
    Fit(String),

    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

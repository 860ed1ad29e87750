use thiserror::Error;

/// Errors produced by the GPTL front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GptlError {
    /// Out-of-grammar construct: unknown token, malformed call, trailing input.
    #[error("syntax error: {0}")]
    Syntax(String),
    /// Well-formed but ill-typed expression (e.g. a numeric in Boolean position).
    #[error("type error: {0}")]
    Type(String),
    /// Expression tree deeper than the configured maximum.
    #[error("depth error: tree depth {depth} exceeds maximum {max}")]
    Depth { depth: usize, max: usize },
}

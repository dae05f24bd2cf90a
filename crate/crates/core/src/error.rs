use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("message has support outside the generating set (index {0})")]
    SupportOutsideCode(usize),

    #[error("empty generating set")]
    EmptyCode,

    #[error("zero direction")]
    ZeroDirection,

    #[error(
        "dimension {k} is not representable; nearest achievable: {below} below{}",
        above.map(|a| format!(", {a} above")).unwrap_or_else(|| ", none above".into())
    )]
    NotRepresentable {
        k: usize,
        below: usize,
        above: Option<usize>,
    },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("translation by {0:#x} is not an automorphism of the code")]
    NotInvariant(usize),

    #[error("code dimension {k} too large for exhaustive decoding (max {max})")]
    TooLarge { k: usize, max: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate metric: |det| = {det:e}")]
    DegenerateMetric { det: f64 },

    #[error("shape mismatch for {what}: expected {expected}, found {found}")]
    ShapeMismatch {
        what: String,
        expected: String,
        found: String,
    },

    #[error("tensor is not an admissible fundamental tensor (residual {residual:e})")]
    InadmissibleF { residual: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("class decomposition failed (reassembly residual {residual:e})")]
    DecompositionFailure { residual: f64 },

    #[error("invalid Weingarten map: {condition} violated (residual {residual:e})")]
    InvalidWeingarten { condition: String, residual: f64 },

    #[error("tensor is not a pure member of a single basic class: {0}")]
    AmbiguousClass(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation failed: {0}")]
    Validation(String),
}

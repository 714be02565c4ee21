use thiserror::Error;

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("size bound exceeded: {what} = {actual} > {limit}")]
    SizeBound { what: &'static str, actual: u64, limit: u64 },

    #[error("boundary composite nonzero: d_{lower} * d_{degree} has entry {value} at ({row}, {col})", lower = degree - 1)]
    NotAComplex {
        degree: usize,
        row: usize,
        col: usize,
        value: String,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("lines do not span the ambient space")]
    NotSpanning,

    #[error("suspension closure failed for cycle #{cycle}: boundary nonzero")]
    ClosureFailure { cycle: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

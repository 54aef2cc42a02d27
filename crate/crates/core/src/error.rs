use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular triangle: zero diagonal entry at row {row}")]
    Singular { row: usize },
    #[error("triangle `{0}` is not declared to have a nonzero diagonal")]
    NotInvertible(String),
    #[error("invalid weights: {name}_{index} = {value} ({requirement})")]
    InvalidWeights {
        name: &'static str,
        index: usize,
        value: String,
        requirement: &'static str,
    },
    #[error("invalid truncation size {size}: {requirement}")]
    InvalidTruncation {
        size: usize,
        requirement: &'static str,
    },
    #[error("unsupported matrix class: {0}")]
    UnsupportedClass(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that come from the mathematics (singular matrices,
    /// invalid weights) rather than from malformed input.
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::DivisionByZero
                | Error::Singular { .. }
                | Error::NotInvertible(_)
                | Error::InvalidWeights { .. }
        )
    }
}

pub(crate) fn require_truncation(size: usize) -> Result<()> {
    if size == 0 {
        return Err(Error::InvalidTruncation {
            size,
            requirement: "must be at least 1",
        });
    }
    Ok(())
}

/// Checkpoint statistics sit at N/4, N/2 and N, so N must split evenly.
pub(crate) fn require_checkpoint_truncation(size: usize, minimum: usize) -> Result<()> {
    if size < minimum || !size.is_multiple_of(4) {
        return Err(Error::InvalidTruncation {
            size,
            requirement: if minimum <= 4 {
                "must be a positive multiple of 4"
            } else {
                "must be a multiple of 4 and at least 8"
            },
        });
    }
    Ok(())
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Pricing(#[from] cirmm::Error),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    /// Some cells failed; the table was still produced.
    #[error("{0} cell(s) failed")]
    CellFailures(usize),
}

impl BenchError {
    /// 1 for bad inputs, 2 for numerical or I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Invalid(_) => 1,
            BenchError::Pricing(e) if e.is_invalid_input() => 1,
            _ => 2,
        }
    }
}

pub type BenchResult<T> = std::result::Result<T, BenchError>;

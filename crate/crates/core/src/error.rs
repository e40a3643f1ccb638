use thiserror::Error;

/// Failures surfaced by workbench operations.
///
/// `Guard` and `Invalid`/`Parse` are usage-level problems; `Axiom`,
/// `NotNilpotent` and `NotLocal` mean the mathematical input does not satisfy
/// the structure an operation requires.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("{what}: size {size} exceeds guard {guard}")]
    Guard {
        what: String,
        size: usize,
        guard: usize,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not {p}-nilpotent")]
    NotNilpotent { p: u32 },
    #[error("axiom violated: {0}")]
    Axiom(String),
    #[error("algebra is not local: {0}")]
    NotLocal(String),
    #[error("missing structure: {0}")]
    Missing(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn guard(what: &str, size: usize, guard: usize) -> Result<()> {
    if size > guard {
        Err(Error::Guard {
            what: what.to_string(),
            size,
            guard,
        })
    } else {
        Ok(())
    }
}

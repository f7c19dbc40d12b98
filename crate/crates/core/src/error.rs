use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("cone is not full-dimensional")]
    NotFullDimensional,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("projection failed: {0}")]
    Projection(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// Deserializes JSON, naming the path of the offending field on failure.
pub fn parse_json<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(s);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner().to_string();
        let inner = inner.strip_prefix("invalid input: ").unwrap_or(&inner);
        if path == "." {
            Error::InvalidInput(format!("{what}: {inner}"))
        } else {
            Error::InvalidInput(format!("{what}: field `{path}`: {inner}"))
        }
    })?;
    de.end().map_err(|e| Error::InvalidInput(format!("{what}: {e}")))?;
    Ok(value)
}

/// Message of an error without the variant prefix, for nesting.
pub(crate) fn bare_message(e: Error) -> String {
    match e {
        Error::InvalidInput(m) => m,
        other => other.to_string(),
    }
}

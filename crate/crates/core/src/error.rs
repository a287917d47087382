use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The closed forms built on `u/v` ratios are singular at λ = 0.
    #[error("singular parameter: {0}")]
    SingularParameter(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("truncation error: {0}")]
    Truncation(String),

    /// A printed closed form produced a complex value where a real
    /// expectation value is required.
    #[error("formula inconsistency: imaginary residue {residue:e} (real part {real:e})")]
    FormulaInconsistency { real: f64, residue: f64 },

    #[error("division domain: {0}")]
    DivisionDomain(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numeric(&self) -> bool {
        !matches!(self, Error::InvalidParameter(_))
    }
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be finite, got {value}")))
    }
}

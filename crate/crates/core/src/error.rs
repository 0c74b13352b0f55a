use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An internal invariant was violated, e.g. a scaling list that yields
    /// non-integer wavenumbers.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    /// The sampled model is not reproduced by its truncated Fourier series.
    #[error("fourier reconstruction failed (max residual {residual:.3e}); k_max = {k_max} is below the model bandwidth")]
    Aliasing { k_max: usize, residual: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

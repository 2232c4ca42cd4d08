use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("grid too coarse: {0:.3} points per shortest wavelength, need at least 4")]
    GridTooCoarse(f64),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("no root of the gap equation in [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("integral diverges: {0}")]
    Divergent(&'static str),

    #[error("approximation inapplicable: {0}")]
    Inapplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

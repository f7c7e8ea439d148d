use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A configuration field is outside its allowed range.
    #[error("{message}")]
    InvalidParameter {
        field: &'static str,
        message: String,
    },

    #[error("Gauss-Hermite order {0} is outside [2, 200]")]
    OrderOutOfRange(usize),

    #[error("noise average sample is not finite at node (eps = {eps:e}, theta = {theta:e})")]
    NonFiniteSample { eps: f64, theta: f64 },

    #[error("quadrature did not converge: achieved error {achieved:e}, requested {requested:e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    #[error("outcome {index} has negative probability {value:e}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("non-finite derivative of outcome {index} at tau = {tau:e}")]
    NonFiniteDerivative { index: usize, tau: f64 },

    #[error("outcome probabilities sum to {sum} instead of 1")]
    Unnormalized { sum: f64 },

    #[error("likelihood maximum at window boundary tau = {tau:e}; delay is unidentifiable in this window")]
    Unidentifiable { tau: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("Fisher information is zero; the Cramer-Rao bound is infinite")]
    ZeroInformation,
}

impl Error {
    pub(crate) fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            message: message.into(),
        }
    }
}

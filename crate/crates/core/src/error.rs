use thiserror::Error;

/// Errors raised by the model, sequence, dimension and series routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),

    #[error("section height {height} outside admissible range (0, {max}]")]
    NonAdmissibleHeight { height: f64, max: f64 },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("quadrature failed to reach tolerance on [{a}, {b}] (error estimate {estimate:e})")]
    QuadratureFailure { a: f64, b: f64, estimate: f64 },

    /// `height` is `None` when the integral vanishes identically.
    #[error(
        "degenerate model: slow divergence integral I(h,h) vanishes {}",
        .height.map_or_else(|| "identically".to_string(), |h| format!("at h = {h}"))
    )]
    DegenerateModel { height: Option<f64> },

    #[error("no sign change of the entry-exit residual below height {height}")]
    BracketFailure { height: f64 },

    #[error("invalid sequence configuration: {0}")]
    InvalidConfig(String),

    #[error("sequence too short or not strictly decreasing: {0}")]
    InvalidSequence(String),

    #[error("gap y_k - y_(k+1) underflows to zero at k = {k}")]
    DegenerateGap { k: usize },

    #[error("insufficient scales for box counting: {0}")]
    InsufficientScales(String),

    #[error("composition requires a series with zero constant term (got {0})")]
    CompositionConstantTerm(f64),

    #[error("series is not invertible: linear coefficient is {0}, expected 1")]
    NotInvertible(f64),

    #[error("series does not have the shape -x + x^2 g~(x): {0}")]
    WrongShape(String),
}

impl Error {
    /// Model and admissibility problems, as opposed to numerical failures.
    pub fn is_model_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::NonAdmissibleHeight { .. }
                | Error::DegenerateModel { .. }
                | Error::InvalidConfig(_)
                | Error::WrongShape(_)
                | Error::NotInvertible(_)
                | Error::CompositionConstantTerm(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

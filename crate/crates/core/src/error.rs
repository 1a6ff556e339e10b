use thiserror::Error;

/// Errors produced by the transduction models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid covariance matrix: {0}")]
    Covariance(String),

    #[error("invalid Gaussian channel: {0}")]
    Channel(String),

    #[error("noise matrix has negative determinant {0:e}")]
    InvalidNoise(f64),

    #[error("parameters are outside the stable region: {0}")]
    Unstable(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("covariance is not reducible to standard form (residual {residual:.3e})")]
    FormExtraction { residual: f64 },

    #[error("gain optimization failed: {0}")]
    Optimization(String),

    #[error("fidelity quadrature did not converge (step-halving change {delta:.3e})")]
    Quadrature { delta: f64 },

    #[error("odd cat state needs a nonzero amplitude")]
    Normalization,

    #[error("equivalent-circuit decomposition degenerates at unit gain product")]
    AdditiveLimit,

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The dressed computational states (or the swap doublet) no longer have a
    /// dominant overlap with their bare counterparts.
    #[error("hybridization: {what} has overlap {overlap:.4} with its bare state (< 0.5)")]
    Hybridization { what: String, overlap: f64 },

    #[error("resonance: data qubit at {omega_q} is resonant with bus eigenstate {index} (dE = {delta_e})")]
    Resonance { index: usize, delta_e: f64, omega_q: f64 },

    #[error("small denominator between P and Q sectors: {pairs:?}")]
    SmallDenominator { pairs: Vec<(usize, usize, f64)> },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("integrator step size underflow at t = {time}")]
    StepUnderflow { time: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value for `{0}`")]
    NonFinite(&'static str),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected} spins, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("step size too large: dt * {rate} = {product:.3e} exceeds {limit}")]
    Unstable {
        rate: &'static str,
        product: f64,
        limit: f64,
    },

    #[error("integration diverged at step {step}")]
    Diverged { step: u64 },

    #[error("photon number of oscillator {index} became non-positive at step {step} after {halvings} step halvings")]
    PhotonFloor {
        index: usize,
        step: u64,
        halvings: u32,
    },

    #[error("truncation at n_max = {n_max} leaves relative tail {tail:.3e} (> 1e-14); increase n_max")]
    Truncation { n_max: usize, tail: f64 },

    #[error("degenerate concentration: mean resultant length {0} is not below 1")]
    DegenerateConcentration(f64),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("missing snapshot at t = {0} s")]
    MissingSnapshot(f64),

    #[error("no photon data in trajectory records")]
    NoPhotonData,

    #[error("overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics (divergence, overflow, truncation)
    /// rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Diverged { .. }
                | Error::PhotonFloor { .. }
                | Error::Truncation { .. }
                | Error::Overflow(_)
                | Error::DegenerateConcentration(_)
        )
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar parameter is outside its allowed domain.
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("index {index} out of range for {len} modes")]
    IndexOutOfRange { index: usize, len: usize },

    /// A mode with zero transmission (or a vanishing harmonic mean) makes
    /// the amplitude balancing undefined.
    #[error("degenerate efficiency: {0}")]
    DegenerateEfficiency(String),

    /// Conditioning on an event of probability zero.
    #[error("conditional quantity undefined: heralding probability is zero")]
    UndefinedConditional,

    #[error("divergent quantity: {0}")]
    Divergent(&'static str),

    /// The coherence window cannot hold the required number of batches.
    #[error("infeasible window: {window} attempts cannot hold {batches} successes")]
    InfeasibleWindow { window: u64, batches: u32 },

    /// Weak coherent pulse too bright for a two-photon truncation.
    #[error("mean photon number {mean_photon_number} too large for two-photon truncation (max 0.5)")]
    Truncation { mean_photon_number: f64 },

    /// Arguments with inconsistent shapes or sizes.
    #[error("contract violation: {0}")]
    Contract(String),
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be a probability in [0, 1]",
        })
    }
}

pub(crate) fn check_nonnegative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and nonnegative",
        })
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and positive",
        })
    }
}

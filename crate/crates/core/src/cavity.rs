//! Cavity-QED reflection model for the spin-photon gate.
//!
//! A qubit in `|0⟩` couples to the cavity, a qubit in `|1⟩` is decoupled.
//! In the narrow-band limit only the resonant reflection coefficients enter
//! the protocol efficiencies.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_nonnegative, check_positive, check_probability, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    /// `C = 4g²/(κγ)`.
    cooperativity: f64,
    /// Total cavity linewidth.
    kappa: f64,
    /// `κ_out / κ`.
    kappa_out_ratio: f64,
    /// Atomic linewidth.
    gamma: f64,
    /// Atom-cavity detuning.
    delta: f64,
}

impl CavityParams {
    pub fn new(
        cooperativity: f64,
        kappa: f64,
        kappa_out_ratio: f64,
        gamma: f64,
        delta: f64,
    ) -> Result<Self> {
        check_nonnegative("cooperativity", cooperativity)?;
        check_positive("kappa", kappa)?;
        check_probability("kappa_out_ratio", kappa_out_ratio)?;
        check_positive("gamma", gamma)?;
        if !delta.is_finite() {
            return Err(crate::Error::InvalidParameter {
                name: "delta",
                value: delta,
                reason: "must be finite",
            });
        }
        Ok(Self {
            cooperativity,
            kappa,
            kappa_out_ratio,
            gamma,
            delta,
        })
    }

    /// Resonant cavity with the outcoupling chosen so that `r_0(0) = −r_1(0)`,
    /// i.e. `κ_out/κ = (C+1)/(C+2)`.
    pub fn tuned(cooperativity: f64, kappa: f64, gamma: f64) -> Result<Self> {
        check_nonnegative("cooperativity", cooperativity)?;
        Self::new(
            cooperativity,
            kappa,
            tuned_outcoupling(cooperativity),
            gamma,
            0.0,
        )
    }

    pub fn cooperativity(&self) -> f64 {
        self.cooperativity
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn kappa_out_ratio(&self) -> f64 {
        self.kappa_out_ratio
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Reflection coefficient `r_k(ω)` conditioned on the qubit state `k`.
    /// `omega` is the pulse detuning from the cavity, in the same angular
    /// frequency units as `kappa`, `gamma` and `delta`.
    pub fn transfer_function(&self, qubit_state: bool, omega: f64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let cavity = one - Complex64::new(0.0, 2.0 * omega / self.kappa);
        let out = 2.0 * self.kappa_out_ratio;
        if qubit_state {
            one - out / cavity
        } else {
            let atom = one - Complex64::new(0.0, 2.0 * (omega - self.delta) / self.gamma);
            one - out * atom / (atom * cavity + self.cooperativity)
        }
    }
}

/// `κ_out/κ = (C+1)/(C+2)`.
pub fn tuned_outcoupling(cooperativity: f64) -> f64 {
    (cooperativity + 1.0) / (cooperativity + 2.0)
}

/// Conditional-reflection efficiency `η_1 = [C/(C+2)]²`.
pub fn reflection_efficiency(cooperativity: f64) -> Result<f64> {
    check_nonnegative("cooperativity", cooperativity)?;
    let r = cooperativity / (cooperativity + 2.0);
    Ok(r * r)
}

/// Cavity-enhanced photon retrieval efficiency `η_s = C/(1+C)`.
pub fn emission_efficiency(cooperativity: f64) -> Result<f64> {
    check_nonnegative("cooperativity", cooperativity)?;
    Ok(cooperativity / (1.0 + cooperativity))
}

/// Success probability of the two-bin intensity-encoding variant,
/// `η_t η_1 η_d / 2`. Capped at one half by the lossy qubit-photon interaction.
pub fn intensity_encoding_success(eta_t: f64, eta_1: f64, eta_d: f64) -> Result<f64> {
    check_probability("eta_t", eta_t)?;
    check_probability("eta_1", eta_1)?;
    check_probability("eta_d", eta_d)?;
    Ok(eta_t * eta_1 * eta_d / 2.0)
}

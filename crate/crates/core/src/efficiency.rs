//! Efficiency bookkeeping for the time-bin photon.
//!
//! Mode index convention, used throughout the crate: bit `l` of a mode index
//! `x` (least-significant bit is `l = 0`) decides whether the time-bin is
//! routed to qubit `l`. Register basis states `|v⟩` use the same ordering.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_nonnegative, check_positive, check_probability, Error, Result};

/// Largest register handled by the efficiency model (2^16 mode arrays).
pub const MAX_QUBITS: usize = 16;

/// Tolerance on `Σ|c_x|² = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Transmission efficiencies of one protocol attempt on an `n`-qubit register.
///
/// * `eta_t`: client to register, including emission.
/// * `eta_0`: per-qubit branch that bypasses the cavity.
/// * `eta_1`: per-qubit branch that reflects off the cavity.
/// * `eta_d`: register to click, including time-bin erasure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyModel {
    eta_t: f64,
    eta_0: f64,
    eta_1: f64,
    eta_d: f64,
    n: usize,
}

impl EfficiencyModel {
    pub fn new(eta_t: f64, eta_0: f64, eta_1: f64, eta_d: f64, n: usize) -> Result<Self> {
        check_probability("eta_t", eta_t)?;
        check_probability("eta_0", eta_0)?;
        check_probability("eta_1", eta_1)?;
        check_probability("eta_d", eta_d)?;
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidParameter {
                name: "n",
                value: n as f64,
                reason: "register size must be in 1..=16",
            });
        }
        Ok(Self {
            eta_t,
            eta_0,
            eta_1,
            eta_d,
            n,
        })
    }

    /// All efficiencies equal to one.
    pub fn lossless(n: usize) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, 1.0, n)
    }

    pub fn eta_t(&self) -> f64 {
        self.eta_t
    }

    pub fn eta_0(&self) -> f64 {
        self.eta_0
    }

    pub fn eta_1(&self) -> f64 {
        self.eta_1
    }

    pub fn eta_d(&self) -> f64 {
        self.eta_d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of time-bins, `2^n`.
    pub fn modes(&self) -> usize {
        1 << self.n
    }

    pub fn with_eta_t(&self, eta_t: f64) -> Result<Self> {
        Self::new(eta_t, self.eta_0, self.eta_1, self.eta_d, self.n)
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(self.eta_t, self.eta_0, self.eta_1, self.eta_d, n)
    }

    /// Efficiency of the single bypass/reflect stage selected by `bit`.
    pub fn stage_efficiency(&self, bit: bool) -> f64 {
        if bit {
            self.eta_1
        } else {
            self.eta_0
        }
    }

    /// `η_x = η_t η_d η_1^{H(x)} η_0^{n−H(x)}`.
    pub fn mode_efficiency(&self, x: usize) -> Result<f64> {
        if x >= self.modes() {
            return Err(Error::IndexOutOfRange {
                index: x,
                len: self.modes(),
            });
        }
        let ones = x.count_ones() as i32;
        let zeros = self.n as i32 - ones;
        Ok(self.eta_t * self.eta_d * self.eta_1.powi(ones) * self.eta_0.powi(zeros))
    }

    /// All `η_x` in mode order.
    pub fn mode_efficiencies(&self) -> Vec<f64> {
        (0..self.modes())
            .map(|x| self.mode_efficiency(x).expect("index in range"))
            .collect()
    }

    /// Harmonic mean `2η_0η_1/(η_0+η_1)` of the two routing branches.
    pub fn branch_harmonic_mean(&self) -> Result<f64> {
        let sum = self.eta_0 + self.eta_1;
        if sum == 0.0 {
            return Err(Error::DegenerateEfficiency(
                "eta_0 + eta_1 = 0".to_string(),
            ));
        }
        Ok(2.0 * self.eta_0 * self.eta_1 / sum)
    }

    /// Closed-form heralding probability of a single photon with balanced
    /// amplitudes, `P₀ = η_t η_d (2η_0η_1/(η_0+η_1))^n`.
    pub fn ideal_success_probability(&self) -> Result<f64> {
        Ok(self.eta_t * self.eta_d * self.branch_harmonic_mean()?.powi(self.n as i32))
    }

    /// Client amplitudes that equalize the posterior weight of every mode,
    /// `|c_x|⁻² = η_x Σ_y η_y⁻¹`, with phases `φ_x = Σ_l θ_l x_l`.
    pub fn balanced_amplitudes(&self, thetas: &[f64]) -> Result<ModeAmplitudes> {
        if thetas.len() != self.n {
            return Err(Error::Contract(format!(
                "expected {} target phases, got {}",
                self.n,
                thetas.len()
            )));
        }
        let etas = self.mode_efficiencies();
        if let Some(x) = etas.iter().position(|&e| e == 0.0) {
            return Err(Error::DegenerateEfficiency(format!(
                "mode {x} has zero transmission"
            )));
        }
        let inverse_sum: f64 = etas.iter().map(|e| e.recip()).sum();
        let amplitudes = etas
            .iter()
            .enumerate()
            .map(|(x, eta)| {
                let magnitude = (eta * inverse_sum).recip().sqrt();
                Complex64::from_polar(magnitude, mode_phase(thetas, x))
            })
            .collect();
        ModeAmplitudes::new(self.n, amplitudes)
    }
}

/// `φ_x = Σ_l θ_l x_l`.
pub fn mode_phase(thetas: &[f64], x: usize) -> f64 {
    thetas
        .iter()
        .enumerate()
        .filter(|(l, _)| (x >> l) & 1 == 1)
        .map(|(_, theta)| theta)
        .sum()
}

/// Normalized complex amplitudes `c_x e^{iφ_x}` of a photon spread over `2^n` time-bins.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeAmplitudes {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl ModeAmplitudes {
    pub fn new(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS || amplitudes.len() != 1 << n {
            return Err(Error::Contract(format!(
                "expected 2^{n} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Contract(format!(
                "mode amplitudes not normalized: sum |c_x|^2 = {norm}"
            )));
        }
        Ok(Self { n, amplitudes })
    }

    /// Equal weights with the given target phases.
    pub fn uniform(thetas: &[f64]) -> Result<Self> {
        let n = thetas.len();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Contract(format!("unsupported register size {n}")));
        }
        let dim = 1usize << n;
        let magnitude = (dim as f64).recip().sqrt();
        let amplitudes = (0..dim)
            .map(|x| Complex64::from_polar(magnitude, mode_phase(thetas, x)))
            .collect();
        Self::new(n, amplitudes)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `|c_x|²` in mode order.
    pub fn weights(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Default fiber attenuation length for 0.2 dB/km, `10/(0.2 ln 10)` km.
pub fn default_attenuation_length_km() -> f64 {
    10.0 / (0.2 * std::f64::consts::LN_10)
}

/// Fiber link: `η_t = exp(−L/L_att) η_t,intrinsic`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceModel {
    length_km: f64,
    attenuation_length_km: f64,
    eta_t_intrinsic: f64,
}

impl DistanceModel {
    pub fn new(length_km: f64, attenuation_length_km: f64, eta_t_intrinsic: f64) -> Result<Self> {
        check_nonnegative("length_km", length_km)?;
        check_positive("attenuation_length_km", attenuation_length_km)?;
        check_probability("eta_t_intrinsic", eta_t_intrinsic)?;
        if eta_t_intrinsic == 0.0 {
            return Err(Error::InvalidParameter {
                name: "eta_t_intrinsic",
                value: 0.0,
                reason: "transmission must be positive",
            });
        }
        Ok(Self {
            length_km,
            attenuation_length_km,
            eta_t_intrinsic,
        })
    }

    /// Standard 0.2 dB/km fiber.
    pub fn fiber(length_km: f64, eta_t_intrinsic: f64) -> Result<Self> {
        Self::new(length_km, default_attenuation_length_km(), eta_t_intrinsic)
    }

    pub fn length_km(&self) -> f64 {
        self.length_km
    }

    pub fn attenuation_length_km(&self) -> f64 {
        self.attenuation_length_km
    }

    pub fn eta_t_intrinsic(&self) -> f64 {
        self.eta_t_intrinsic
    }

    pub fn with_length(&self, length_km: f64) -> Result<Self> {
        Self::new(length_km, self.attenuation_length_km, self.eta_t_intrinsic)
    }

    pub fn eta_t(&self) -> f64 {
        (-self.length_km / self.attenuation_length_km).exp() * self.eta_t_intrinsic
    }
}

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::efficiency::mode_phase;
use crate::error::{Error, Result};

/// Largest register simulated with a dense joint photon-register state.
pub const MAX_STATEVECTOR_QUBITS: usize = 10;

pub(crate) fn check_register_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_STATEVECTOR_QUBITS {
        Err(Error::InvalidParameter {
            name: "n",
            value: n as f64,
            reason: "statevector register size must be in 1..=10",
        })
    } else {
        Ok(())
    }
}

/// Pure state of an `n`-qubit register in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterState {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl RegisterState {
    pub fn new(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_register_size(n)?;
        if amplitudes.len() != 1 << n {
            return Err(Error::Contract(format!(
                "register of {n} qubits needs {} amplitudes, got {}",
                1 << n,
                amplitudes.len()
            )));
        }
        Ok(Self { n, amplitudes })
    }

    /// `|+⟩^⊗n`.
    pub fn plus(n: usize) -> Result<Self> {
        check_register_size(n)?;
        let dim = 1usize << n;
        let a = Complex64::new((dim as f64).recip().sqrt(), 0.0);
        Ok(Self {
            n,
            amplitudes: vec![a; dim],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::UndefinedConditional);
        }
        self.amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(self)
    }

    /// `|⟨self|other⟩|² / (‖self‖² ‖other‖²)`, insensitive to global phase.
    pub fn fidelity(&self, other: &RegisterState) -> f64 {
        debug_assert_eq!(self.n, other.n);
        let overlap: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        overlap.norm_sqr() / (self.norm_sqr() * other.norm_sqr())
    }

    /// Largest amplitude difference after removing the relative global phase.
    pub fn distance_up_to_phase(&self, other: &RegisterState) -> f64 {
        let overlap: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max)
    }

    /// `R_z(angle) = diag(e^{−i angle/2}, e^{i angle/2})` on `qubit`.
    pub fn rotate_z(&mut self, qubit: usize, angle: f64) {
        let low = Complex64::from_polar(1.0, -angle / 2.0);
        let high = Complex64::from_polar(1.0, angle / 2.0);
        for (v, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= if (v >> qubit) & 1 == 1 { high } else { low };
        }
    }
}

/// Product of equatorial states `⊗_l (|0⟩ + e^{iθ_l}|1⟩)/√2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetState {
    thetas: Vec<f64>,
}

impl TargetState {
    pub fn new(thetas: Vec<f64>) -> Result<Self> {
        check_register_size(thetas.len())?;
        if let Some(t) = thetas.iter().find(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: *t,
                reason: "must be finite",
            });
        }
        Ok(Self { thetas })
    }

    /// Uniformly random phases in `[0, 2π)`.
    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        Self::new((0..n).map(|_| rng.random::<f64>() * 2.0 * PI).collect())
    }

    pub fn n(&self) -> usize {
        self.thetas.len()
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    /// Amplitude of `|v⟩` is `exp(iΣθ_l v_l)/√2^n`.
    pub fn statevector(&self) -> RegisterState {
        let dim = 1usize << self.n();
        let magnitude = (dim as f64).recip().sqrt();
        let amplitudes = (0..dim)
            .map(|v| Complex64::from_polar(magnitude, mode_phase(&self.thetas, v)))
            .collect();
        RegisterState {
            n: self.n(),
            amplitudes,
        }
    }
}

//! Single-photon-sector statevector simulation of the reflection protocol.
//!
//! The joint state lives on `2^n` time-bin modes times `2^n` register basis
//! states. Loss is applied as a per-mode transmission filter conditioned on
//! photon survival; vacuum and multi-photon branches are handled
//! analytically in [`crate::imperfections`].

mod absorption;
mod register;

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::efficiency::{mode_phase, EfficiencyModel, ModeAmplitudes};
use crate::error::{Error, Result};

pub use absorption::{
    correct_absorption_signs, run_absorption_oracle, sample_absorption_run, AbsorptionRun,
};
pub use register::{RegisterState, TargetState, MAX_STATEVECTOR_QUBITS};

use register::check_register_size;

const JOINT_NORM_TOL: f64 = 1e-10;

/// Joint photon-register wavefunction, amplitude `(x, v)` for the photon in
/// mode `x` and the register in `|v⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl JointState {
    pub fn new(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_register_size(n)?;
        if amplitudes.len() != 1 << (2 * n) {
            return Err(Error::Contract(format!(
                "joint state on {n} qubits needs 4^{n} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > JOINT_NORM_TOL {
            return Err(Error::Contract(format!("joint state norm^2 = {norm}")));
        }
        Ok(Self { n, amplitudes })
    }

    /// Photon and register in a product state.
    pub fn product(photon: &ModeAmplitudes, register: &RegisterState) -> Result<Self> {
        if photon.n() != register.n() {
            return Err(Error::Contract(format!(
                "photon spans 2^{} modes but register has {} qubits",
                photon.n(),
                register.n()
            )));
        }
        check_register_size(register.n())?;
        let register = register.clone().normalized()?;
        let amplitudes = photon
            .as_slice()
            .iter()
            .flat_map(|c| register.amplitudes().iter().map(move |r| c * r))
            .collect();
        Ok(Self {
            n: photon.n(),
            amplitudes,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn amplitude(&self, mode: usize, basis: usize) -> Complex64 {
        self.amplitudes[mode * self.dim() + basis]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Single-photon sector of the multi-mode gate: `(x, v)` picks up
    /// `(−1)^{popcount(x & v)}`.
    pub fn apply_controlled_phase(&self) -> JointState {
        let dim = self.dim();
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let (x, v) = (i / dim, i % dim);
                if (x & v).count_ones() % 2 == 1 {
                    -a
                } else {
                    *a
                }
            })
            .collect();
        JointState {
            n: self.n,
            amplitudes,
        }
    }

    /// Hadamard on every register qubit.
    pub fn apply_register_hadamards(&self) -> JointState {
        let dim = self.dim();
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let mut amplitudes = self.amplitudes.clone();
        for row in amplitudes.chunks_mut(dim) {
            let mut half = 1;
            while half < dim {
                for block in (0..dim).step_by(2 * half) {
                    for i in block..block + half {
                        let (a, b) = (row[i], row[i + half]);
                        row[i] = (a + b) * scale;
                        row[i + half] = (a - b) * scale;
                    }
                }
                half *= 2;
            }
        }
        JointState {
            n: self.n,
            amplitudes,
        }
    }

    /// Phase `e^{iφ_x}` on photon mode `x`.
    pub fn apply_mode_phases(&self, phases: &[f64]) -> Result<JointState> {
        let dim = self.dim();
        if phases.len() != dim {
            return Err(Error::Contract(format!(
                "expected {dim} mode phases, got {}",
                phases.len()
            )));
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| a * Complex64::from_polar(1.0, phases[i / dim]))
            .collect();
        Ok(JointState {
            n: self.n,
            amplitudes,
        })
    }

    /// Conditions on the photon surviving a per-mode loss channel with
    /// transmissions `η_x`. Returns the renormalized state and the survival
    /// probability.
    pub fn transmit(&self, transmissions: &[f64]) -> Result<(JointState, f64)> {
        let dim = self.dim();
        if transmissions.len() != dim {
            return Err(Error::Contract(format!(
                "expected {dim} transmissions, got {}",
                transmissions.len()
            )));
        }
        let mut amplitudes: Vec<Complex64> = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| a * transmissions[i / dim].sqrt())
            .collect();
        let survival: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if survival == 0.0 {
            return Err(Error::UndefinedConditional);
        }
        let norm = survival.sqrt();
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok((
            JointState {
                n: self.n,
                amplitudes,
            },
            survival,
        ))
    }

    /// Time-bin erasure: `|x⟩ → Σ_k e^{2πi kx/2^n} |k⟩ / √2^n` on the photon.
    pub fn apply_mode_fourier(&self) -> JointState {
        let dim = self.dim();
        let fft = FftPlanner::<f64>::new().plan_fft_inverse(dim);
        let scale = (dim as f64).recip().sqrt();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim * dim];
        let mut column = vec![Complex64::new(0.0, 0.0); dim];
        for v in 0..dim {
            for x in 0..dim {
                column[x] = self.amplitudes[x * dim + v];
            }
            fft.process(&mut column);
            for k in 0..dim {
                amplitudes[k * dim + v] = column[k] * scale;
            }
        }
        JointState {
            n: self.n,
            amplitudes,
        }
    }

    /// Projects the photon onto mode (port) `k`.
    pub fn herald(&self, port: usize) -> Result<HeraldOutcome> {
        let dim = self.dim();
        if port >= dim {
            return Err(Error::IndexOutOfRange {
                index: port,
                len: dim,
            });
        }
        let row = self.amplitudes[port * dim..(port + 1) * dim].to_vec();
        let state = RegisterState::new(self.n, row)?;
        let probability = state.norm_sqr();
        Ok(HeraldOutcome {
            port,
            register_state: state.normalized()?,
            probability,
        })
    }
}

/// Register state after a click at Fourier port `port`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldOutcome {
    pub port: usize,
    pub register_state: RegisterState,
    /// Absolute probability of this click, including loss.
    pub probability: f64,
}

fn check_sizes(model: &EfficiencyModel, target: &TargetState) -> Result<()> {
    if model.n() != target.n() {
        return Err(Error::Contract(format!(
            "model has {} qubits, target has {}",
            model.n(),
            target.n()
        )));
    }
    check_register_size(model.n())
}

fn herald_all(state: &JointState, survival: f64) -> Result<Vec<HeraldOutcome>> {
    (0..state.dim())
        .map(|k| {
            state.herald(k).map(|mut o| {
                o.probability *= survival;
                o
            })
        })
        .collect()
}

/// Emission-based protocol: the client sends a balanced, phase-encoded photon,
/// the register (in `|+⟩^⊗n`) applies the multi-mode gate and Hadamards, and
/// the photon is detected behind a Fourier transform over the time-bins.
///
/// With a lossless model every port has probability `2^{-n}`. Lossy models
/// enter as a per-mode transmission filter, so the port probabilities sum
/// to `P₀`.
pub fn run_ideal_protocol(
    model: &EfficiencyModel,
    target: &TargetState,
) -> Result<Vec<HeraldOutcome>> {
    check_sizes(model, target)?;
    let photon = model.balanced_amplitudes(target.thetas())?;
    let joint = JointState::product(&photon, &RegisterState::plus(model.n())?)?;
    let (joint, survival) = joint.transmit(&model.mode_efficiencies())?;
    let joint = joint
        .apply_controlled_phase()
        .apply_register_hadamards()
        .apply_mode_fourier();
    herald_all(&joint, survival)
}

/// Measurement-based variant: the server prepares the light-matter resource
/// state with an unphased photon, and the client imprints `φ_x` on the
/// received time-bins before erasing the which-bin information.
pub fn run_reversed_protocol(
    model: &EfficiencyModel,
    target: &TargetState,
) -> Result<Vec<HeraldOutcome>> {
    check_sizes(model, target)?;
    let n = model.n();
    let photon = model.balanced_amplitudes(&vec![0.0; n])?;
    let resource = JointState::product(&photon, &RegisterState::plus(n)?)?
        .apply_controlled_phase()
        .apply_register_hadamards();
    let (received, survival) = resource.transmit(&model.mode_efficiencies())?;
    let phases: Vec<f64> = (0..1usize << n)
        .map(|x| mode_phase(target.thetas(), x))
        .collect();
    let detected = received.apply_mode_phases(&phases)?.apply_mode_fourier();
    herald_all(&detected, survival)
}

/// Undoes the port-dependent phase: `R_z(−2πk·2^q/2^n)` on qubit `q`.
pub fn apply_corrections(outcome: &HeraldOutcome) -> RegisterState {
    let mut state = outcome.register_state.clone();
    let n = state.n();
    let dim = (1u64 << n) as f64;
    for q in 0..n {
        let angle = -2.0 * PI * outcome.port as f64 * (1u64 << q) as f64 / dim;
        state.rotate_z(q, angle);
    }
    state
}

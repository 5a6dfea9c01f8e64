//! Gate-level simulation of the single-communication-qubit receiver.
//!
//! Each time-bin is absorbed into a communication qubit, copied by CNOTs onto
//! a heralding qubit and onto every register qubit selected by the bin index,
//! then the communication qubit is measured in the X basis and reset. The
//! photon, communication qubit, heralding qubit and register are tracked as
//! a sparse superposition of basis configurations.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use super::register::{check_register_size, RegisterState, TargetState};
use crate::efficiency::ModeAmplitudes;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Config {
    /// Time-bin still carrying the photon, `None` once absorbed.
    photon: Option<usize>,
    comm: bool,
    herald: bool,
    register: usize,
}

#[derive(Debug, Clone)]
struct Circuit {
    state: BTreeMap<Config, Complex64>,
}

impl Circuit {
    fn new(photon: &ModeAmplitudes) -> Self {
        let state = photon
            .as_slice()
            .iter()
            .enumerate()
            .map(|(x, a)| {
                (
                    Config {
                        photon: Some(x),
                        comm: false,
                        herald: false,
                        register: 0,
                    },
                    *a,
                )
            })
            .collect();
        Self { state }
    }

    fn map_configs(&mut self, f: impl Fn(Config) -> Config) {
        let old = std::mem::take(&mut self.state);
        for (cfg, a) in old {
            *self.state.entry(f(cfg)).or_default() += a;
        }
    }

    /// `(α + β a_x†)|vac⟩|0⟩_c → |vac⟩(α|0⟩ + β|1⟩)_c`.
    fn absorb(&mut self, bin: usize) -> Result<()> {
        if self
            .state
            .keys()
            .any(|c| c.photon == Some(bin) && c.comm)
        {
            return Err(Error::Contract(
                "communication qubit not reset before absorption".to_string(),
            ));
        }
        self.map_configs(|c| {
            if c.photon == Some(bin) {
                Config {
                    photon: None,
                    comm: true,
                    ..c
                }
            } else {
                c
            }
        });
        Ok(())
    }

    fn cnot_comm_to_herald(&mut self) {
        self.map_configs(|c| Config {
            herald: c.herald ^ c.comm,
            ..c
        });
    }

    fn cnot_comm_to_register(&mut self, qubit: usize) {
        self.map_configs(|c| {
            if c.comm {
                Config {
                    register: c.register ^ (1 << qubit),
                    ..c
                }
            } else {
                c
            }
        });
    }

    fn hadamard_comm(&mut self) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let old = std::mem::take(&mut self.state);
        for (cfg, a) in old {
            let zero = Config { comm: false, ..cfg };
            let one = Config { comm: true, ..cfg };
            *self.state.entry(zero).or_default() += a * s;
            *self.state.entry(one).or_default() += if cfg.comm { -a * s } else { a * s };
        }
    }

    fn probability_comm(&self, outcome: bool) -> f64 {
        self.state
            .iter()
            .filter(|(c, _)| c.comm == outcome)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    fn project_comm(&mut self, outcome: bool) -> Result<f64> {
        let p = self.probability_comm(outcome);
        if p == 0.0 {
            return Err(Error::UndefinedConditional);
        }
        let norm = p.sqrt();
        self.state.retain(|c, _| c.comm == outcome);
        self.state.values_mut().for_each(|a| *a /= norm);
        Ok(p)
    }

    fn reset_comm(&mut self) {
        self.map_configs(|c| Config { comm: false, ..c });
    }

    /// Register state conditioned on an absorbed photon and a raised herald.
    fn heralded_register(&self, n: usize) -> Result<RegisterState> {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (c, a) in &self.state {
            if c.photon.is_none() && c.herald && !c.comm {
                amplitudes[c.register] += a;
            }
        }
        RegisterState::new(n, amplitudes)?.normalized()
    }
}

/// Result of a receiver run: pre-correction register state and the
/// communication-qubit readouts, one per time-bin.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionRun {
    pub register_state: RegisterState,
    pub outcomes: Vec<bool>,
}

fn run_circuit(
    target: &TargetState,
    mut choose: impl FnMut(usize, f64) -> bool,
) -> Result<AbsorptionRun> {
    let n = target.n();
    check_register_size(n)?;
    let photon = ModeAmplitudes::uniform(target.thetas())?;
    let mut circuit = Circuit::new(&photon);
    let mut outcomes = Vec::with_capacity(1 << n);
    for bin in 0..1usize << n {
        circuit.absorb(bin)?;
        circuit.cnot_comm_to_herald();
        for qubit in (0..n).filter(|q| (bin >> q) & 1 == 1) {
            circuit.cnot_comm_to_register(qubit);
        }
        circuit.hadamard_comm();
        let outcome = choose(bin, circuit.probability_comm(true));
        circuit.project_comm(outcome)?;
        circuit.reset_comm();
        outcomes.push(outcome);
    }
    Ok(AbsorptionRun {
        register_state: circuit.heralded_register(n)?,
        outcomes,
    })
}

/// Runs the receiver with injected readouts (`true` = communication qubit
/// found in `|1⟩`, giving `σ_x = −1`). Returns `Σ_x σ_x c_x e^{iφ_x}|x⟩`.
pub fn run_absorption_oracle(
    target: &TargetState,
    measurement_outcomes: &[bool],
) -> Result<RegisterState> {
    let bins = 1usize << target.n();
    if measurement_outcomes.len() != bins {
        return Err(Error::Contract(format!(
            "expected {bins} measurement outcomes, got {}",
            measurement_outcomes.len()
        )));
    }
    Ok(run_circuit(target, |bin, _| measurement_outcomes[bin])?.register_state)
}

/// Same circuit with Born-rule sampling of every readout.
pub fn sample_absorption_run<R: Rng + ?Sized>(
    target: &TargetState,
    rng: &mut R,
) -> Result<AbsorptionRun> {
    run_circuit(target, |_, p_one| rng.random::<f64>() < p_one)
}

/// Removes the known readout signs by multiplying `|x⟩` with `σ_x`.
pub fn correct_absorption_signs(
    state: &RegisterState,
    measurement_outcomes: &[bool],
) -> Result<RegisterState> {
    if measurement_outcomes.len() != state.amplitudes().len() {
        return Err(Error::Contract(format!(
            "expected {} measurement outcomes, got {}",
            state.amplitudes().len(),
            measurement_outcomes.len()
        )));
    }
    let amplitudes = state
        .amplitudes()
        .iter()
        .zip(measurement_outcomes)
        .map(|(a, &flip)| if flip { -a } else { *a })
        .collect();
    RegisterState::new(state.n(), amplitudes)
}

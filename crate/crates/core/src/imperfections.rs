//! Imperfection model: mode mismatch, two-photon components of a weak
//! coherent pulse and staged photon loss.
//!
//! Heralding with a photon-number-resolving detector selects the branches in
//! which exactly one photon reaches the detector:
//!
//! * the single-photon term with no loss,
//! * a two-photon term where one photon is lost before the first qubit
//!   (indistinguishable from the ideal single-photon interaction),
//! * a two-photon term where one photon is lost after interacting with some
//!   qubits, leaving wrong phases on them.
//!
//! Mode mismatch `ε` scales every fidelity by `1 − ε`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::efficiency::EfficiencyModel;
use crate::error::{check_probability, Error, Result};

const PULSE_NORM_TOL: f64 = 1e-12;

/// Client state truncated at two photons, with single-photon mode mismatch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClientPulse {
    alpha0: Complex64,
    alpha1: Complex64,
    alpha2: Complex64,
    /// Weight of the single-photon component in the mode that does not
    /// perform the gate.
    epsilon: f64,
}

impl ClientPulse {
    pub fn new(
        alpha0: Complex64,
        alpha1: Complex64,
        alpha2: Complex64,
        epsilon: f64,
    ) -> Result<Self> {
        check_probability("epsilon", epsilon)?;
        let norm = alpha0.norm_sqr() + alpha1.norm_sqr() + alpha2.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > PULSE_NORM_TOL {
            return Err(Error::Contract(format!(
                "photon-number amplitudes not normalized: sum = {norm}"
            )));
        }
        Ok(Self {
            alpha0,
            alpha1,
            alpha2,
            epsilon,
        })
    }

    pub fn single_photon(epsilon: f64) -> Result<Self> {
        Self::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            epsilon,
        )
    }

    /// Pulse with the given one- and two-photon probabilities and real
    /// amplitudes; the vacuum takes the remainder.
    pub fn from_populations(p1: f64, p2: f64, epsilon: f64) -> Result<Self> {
        check_probability("p1", p1)?;
        check_probability("p2", p2)?;
        let p0 = 1.0 - p1 - p2;
        if p0 < -PULSE_NORM_TOL {
            return Err(Error::Contract(format!(
                "photon-number populations exceed one: {p1} + {p2}"
            )));
        }
        Self::new(
            Complex64::new(p0.max(0.0).sqrt(), 0.0),
            Complex64::new(p1.sqrt(), 0.0),
            Complex64::new(p2.sqrt(), 0.0),
            epsilon,
        )
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.alpha0, self.alpha1, self.alpha2, epsilon)
    }

    pub fn alpha0(&self) -> Complex64 {
        self.alpha0
    }

    pub fn alpha1(&self) -> Complex64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> Complex64 {
        self.alpha2
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `|α₁|²`.
    pub fn one_photon(&self) -> f64 {
        self.alpha1.norm_sqr()
    }

    /// `|α₂|²`.
    pub fn two_photon(&self) -> f64 {
        self.alpha2.norm_sqr()
    }
}

/// Attenuated laser pulse with coherent amplitude `α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WcpSource {
    pub mean_amplitude: Complex64,
}

impl WcpSource {
    pub fn new(mean_amplitude: Complex64) -> Self {
        Self { mean_amplitude }
    }

    /// Real amplitude with mean photon number `mu = |α|²`.
    pub fn with_mean_photon_number(mu: f64) -> Result<Self> {
        crate::error::check_nonnegative("mean_photon_number", mu)?;
        Ok(Self::new(Complex64::new(mu.sqrt(), 0.0)))
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.mean_amplitude.norm_sqr()
    }
}

/// Truncated pulse `(1 − |α|²/2, α, α²/√2)`, renormalized so the three
/// populations sum to one. `ε = 0`.
pub fn wcp_amplitudes(source: &WcpSource) -> Result<ClientPulse> {
    let alpha = source.mean_amplitude;
    let mu = alpha.norm_sqr();
    if !mu.is_finite() || mu > 0.5 {
        return Err(Error::Truncation {
            mean_photon_number: mu,
        });
    }
    let raw = [
        Complex64::new(1.0 - mu / 2.0, 0.0),
        alpha,
        alpha * alpha / std::f64::consts::SQRT_2,
    ];
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    ClientPulse::new(raw[0] / norm, raw[1] / norm, raw[2] / norm, 0.0)
}

/// Probability `L[x, l]` that the photon in time-bin `x` is lost before the
/// `l`-th qubit (`l = 0`: in transmission; `l = n`: after the last qubit,
/// including detection).
#[derive(Debug, Clone, PartialEq)]
pub struct LossLedger {
    n: usize,
    losses: Vec<f64>,
}

impl LossLedger {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, mode: usize, stage: usize) -> f64 {
        self.losses[mode * (self.n + 1) + stage]
    }

    /// Loss probabilities of one mode, stages `0..=n`.
    pub fn mode(&self, mode: usize) -> &[f64] {
        &self.losses[mode * (self.n + 1)..(mode + 1) * (self.n + 1)]
    }
}

pub fn loss_ledger(model: &EfficiencyModel) -> LossLedger {
    let n = model.n();
    let mut losses = Vec::with_capacity((1 << n) * (n + 1));
    for x in 0..1usize << n {
        // Survival up to (not including) stage q.
        let mut reached = model.eta_t();
        losses.push(1.0 - model.eta_t());
        for q in 1..=n {
            let eta = model.stage_efficiency((x >> (q - 1)) & 1 == 1);
            let stage = if q == n { eta * model.eta_d() } else { eta };
            losses.push((1.0 - stage) * reached);
            reached *= eta;
        }
    }
    LossLedger { n, losses }
}

fn balanced_weights(model: &EfficiencyModel) -> Result<Vec<f64>> {
    Ok(model.balanced_amplitudes(&vec![0.0; model.n()])?.weights())
}

/// Heralding probability with a photon-number-resolving detector,
/// `P = |α₁|²P₀ + 2|α₂|²P₀(1 − P₀)`.
pub fn herald_probability(pulse: &ClientPulse, model: &EfficiencyModel) -> Result<f64> {
    let p0 = model.ideal_success_probability()?;
    Ok(pulse.one_photon() * p0 + 2.0 * pulse.two_photon() * p0 * (1.0 - p0))
}

fn nonzero(p: f64) -> Result<f64> {
    if p > 0.0 {
        Ok(p)
    } else {
        Err(Error::UndefinedConditional)
    }
}

/// Weight of the faithful single-photon interaction, `⟨χ|χ⟩`: the lossless
/// single photon plus the two-photon term that lost one photon before
/// reaching the register.
fn faithful_weight(pulse: &ClientPulse, model: &EfficiencyModel) -> Result<f64> {
    let p0 = model.ideal_success_probability()?;
    Ok(p0 * (pulse.one_photon() + 2.0 * pulse.two_photon() * (1.0 - model.eta_t())))
}

/// Fraction of heralds caused by the faithful single-photon interaction,
/// `P_S = ⟨χ|χ⟩ / P`.
pub fn single_photon_fraction(pulse: &ClientPulse, model: &EfficiencyModel) -> Result<f64> {
    let p = nonzero(herald_probability(pulse, model)?)?;
    Ok(faithful_weight(pulse, model)? / p)
}

/// Fraction of heralds caused by the single-photon term alone, `|α₁|²P₀ / P`.
pub fn ideal_branch_fraction(pulse: &ClientPulse, model: &EfficiencyModel) -> Result<f64> {
    let p = nonzero(herald_probability(pulse, model)?)?;
    Ok(pulse.one_photon() * model.ideal_success_probability()? / p)
}

/// `F ≥ (1−ε)(P₀/P)[|α₁|² + 2|α₂|²(1−η_t)]`: every unfaithful branch is
/// assigned zero fidelity.
pub fn fidelity_lower_bound(pulse: &ClientPulse, model: &EfficiencyModel) -> Result<f64> {
    Ok((1.0 - pulse.epsilon()) * single_photon_fraction(pulse, model)?)
}

/// Fidelity estimate that credits partially corrupted branches.
///
/// For one qubit this is the two-bin average
/// `(1−ε)[1 − ½ η_1/(η_0+η_1) (1 − P_S)]`; for larger registers it is the
/// branch sum of [`fidelity_estimate_branch_sum`].
pub fn fidelity_estimate(pulse: &ClientPulse, model: &EfficiencyModel) -> Result<f64> {
    if model.n() == 1 {
        let ps = single_photon_fraction(pulse, model)?;
        let late = model.eta_1() / (model.eta_0() + model.eta_1());
        Ok((1.0 - pulse.epsilon()) * (1.0 - 0.5 * late * (1.0 - ps)))
    } else {
        fidelity_estimate_branch_sum(pulse, model)
    }
}

/// `(1−ε)[P_S + (2|α₂|²P₀/P) Σ_x Σ_{l=1..n} |c_x|² L[x,l] 2^{−w(x,l)}]`, where
/// `w(x,l)` counts the ones among the first `l` bits of `x`: a photon lost
/// after `l` qubits scrambles the phase of every qubit it touched.
pub fn fidelity_estimate_branch_sum(
    pulse: &ClientPulse,
    model: &EfficiencyModel,
) -> Result<f64> {
    let p = nonzero(herald_probability(pulse, model)?)?;
    let p0 = model.ideal_success_probability()?;
    let weights = balanced_weights(model)?;
    let ledger = loss_ledger(model);
    let n = model.n();
    let scrambled: f64 = weights
        .iter()
        .enumerate()
        .map(|(x, w)| {
            (1..=n)
                .map(|l| ledger.get(x, l) * late_loss_fidelity(x, l))
                .sum::<f64>()
                * w
        })
        .sum();
    let ps = faithful_weight(pulse, model)? / p;
    Ok((1.0 - pulse.epsilon()) * (ps + 2.0 * pulse.two_photon() * p0 / p * scrambled))
}

/// `2^{−popcount(x mod 2^l)}`.
pub fn late_loss_fidelity(mode: usize, stage: usize) -> f64 {
    let touched = (mode & ((1usize << stage) - 1)).count_ones();
    0.5f64.powi(touched as i32)
}

/// `⟨χ₂|χ₂⟩`, the weight of both photons of the two-photon term reaching
/// the detector. Evaluated over the two-photon Fock basis `|1_x 1_x'⟩`
/// (`x < x'`) and `|2_x⟩`.
pub fn non_pnr_probability_correction(
    pulse: &ClientPulse,
    model: &EfficiencyModel,
) -> Result<f64> {
    let weights = balanced_weights(model)?;
    let arriving: Vec<f64> = weights
        .iter()
        .zip(model.mode_efficiencies())
        .map(|(w, eta)| w * eta)
        .collect();
    // (α₂/√2)(Σ f_x a_x†)²|∅⟩: |1_x 1_x'⟩ has amplitude √2 α₂ f_x f_x',
    // |2_x⟩ has amplitude α₂ f_x².
    let mut below = 0.0;
    let mut total = 0.0;
    for a in &arriving {
        total += 2.0 * a * below + a * a;
        below += a;
    }
    Ok(pulse.two_photon() * total)
}

/// Worst-case bound for a threshold (non-number-resolving) detector:
/// heralds from two transmitted photons count as failures, `P → P + ⟨χ₂|χ₂⟩`.
pub fn threshold_detector_bound(
    pulse: &ClientPulse,
    model: &EfficiencyModel,
) -> Result<(f64, f64)> {
    let p = herald_probability(pulse, model)? + non_pnr_probability_correction(pulse, model)?;
    let p = nonzero(p)?;
    let bound = (1.0 - pulse.epsilon()) * faithful_weight(pulse, model)? / p;
    Ok((p, bound))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchLabel {
    IdealSingle,
    TwoMinusEarlyLoss,
    TwoMinusLateLoss { mode: usize, stage: usize },
    TwoTransmitted { first: usize, second: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub label: BranchLabel,
    /// Unnormalized probability of the branch.
    pub weight: f64,
    /// Fidelity with the target, before the `1 − ε` mode-mismatch factor.
    pub fidelity: f64,
}

/// Every photon-number/loss outcome that can trigger a single click.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchEnsemble {
    branches: Vec<Branch>,
    epsilon: f64,
}

/// Largest register for which all two-photon branches are listed.
pub const MAX_ENUMERATED_QUBITS: usize = 10;

impl BranchEnsemble {
    pub fn enumerate(pulse: &ClientPulse, model: &EfficiencyModel) -> Result<Self> {
        let n = model.n();
        if n > MAX_ENUMERATED_QUBITS {
            return Err(Error::InvalidParameter {
                name: "n",
                value: n as f64,
                reason: "branch enumeration supports at most 10 qubits",
            });
        }
        let weights = balanced_weights(model)?;
        let etas = model.mode_efficiencies();
        let ledger = loss_ledger(model);
        let arriving: f64 = weights.iter().zip(&etas).map(|(w, e)| w * e).sum();
        let (p1, p2) = (pulse.one_photon(), pulse.two_photon());

        let mut branches = vec![Branch {
            label: BranchLabel::IdealSingle,
            weight: p1 * arriving,
            fidelity: 1.0,
        }];
        let early: f64 = weights
            .iter()
            .enumerate()
            .map(|(x, w)| w * ledger.get(x, 0))
            .sum();
        branches.push(Branch {
            label: BranchLabel::TwoMinusEarlyLoss,
            weight: 2.0 * p2 * arriving * early,
            fidelity: 1.0,
        });
        for (x, w) in weights.iter().enumerate() {
            for stage in 1..=n {
                branches.push(Branch {
                    label: BranchLabel::TwoMinusLateLoss { mode: x, stage },
                    weight: 2.0 * p2 * arriving * w * ledger.get(x, stage),
                    fidelity: late_loss_fidelity(x, stage),
                });
            }
        }
        for first in 0..weights.len() {
            for second in first..weights.len() {
                let a = weights[first] * etas[first];
                let b = weights[second] * etas[second];
                let weight = if first == second { p2 * a * a } else { 2.0 * p2 * a * b };
                branches.push(Branch {
                    label: BranchLabel::TwoTransmitted { first, second },
                    weight,
                    fidelity: 0.0,
                });
            }
        }
        Ok(Self {
            branches,
            epsilon: pulse.epsilon(),
        })
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    fn sum(&self, keep: impl Fn(&BranchLabel) -> bool, f: impl Fn(&Branch) -> f64) -> f64 {
        self.branches
            .iter()
            .filter(|b| keep(&b.label))
            .map(f)
            .sum()
    }

    /// Total heralding weight seen by a number-resolving detector.
    pub fn herald_weight(&self) -> f64 {
        self.sum(|l| !matches!(l, BranchLabel::TwoTransmitted { .. }), |b| b.weight)
    }

    /// Heralding weight of a threshold detector, which also clicks on two
    /// transmitted photons.
    pub fn threshold_herald_weight(&self) -> f64 {
        self.sum(|_| true, |b| b.weight)
    }

    /// `⟨χ|χ⟩`.
    pub fn faithful_weight(&self) -> f64 {
        self.sum(
            |l| matches!(l, BranchLabel::IdealSingle | BranchLabel::TwoMinusEarlyLoss),
            |b| b.weight,
        )
    }

    /// `⟨χ_⊥|χ_⊥⟩`.
    pub fn partial_loss_weight(&self) -> f64 {
        self.sum(
            |l| matches!(l, BranchLabel::TwoMinusLateLoss { .. }),
            |b| b.weight,
        )
    }

    /// Weight-averaged fidelity over number-resolved heralds, times `1 − ε`.
    pub fn mean_fidelity(&self) -> Result<f64> {
        let p = nonzero(self.herald_weight())?;
        let credited = self.sum(
            |l| !matches!(l, BranchLabel::TwoTransmitted { .. }),
            |b| b.weight * b.fidelity,
        );
        Ok((1.0 - self.epsilon) * credited / p)
    }
}

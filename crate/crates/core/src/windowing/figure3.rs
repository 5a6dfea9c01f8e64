//! Distance sweeps of the windowed preparation rate for every batch size,
//! with a double-click reference curve.

use serde::{Deserialize, Serialize};

use super::{
    analytic_q1_rate, asymptotic_rate, simulate_window_rate, AttemptKind, RateResult,
    WindowExperiment, DEFAULT_TRAJECTORIES,
};
use crate::cavity::{emission_efficiency, reflection_efficiency};
use crate::efficiency::{default_attenuation_length_km, DistanceModel, EfficiencyModel};
use crate::error::{Error, Result};

/// Hardware parameters of the sweep. Defaults: `η_t,intr = η_0 = η_d = 0.9`,
/// `C = 38`, 30 ns time-bins, 0.2 dB/km fiber, `w0 = 2000`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure3Params {
    pub eta_t_intrinsic: f64,
    pub eta_0: f64,
    /// Explicit coupled-qubit efficiency; `η_0·[C/(C+2)]²` when absent.
    pub eta_1: Option<f64>,
    pub eta_d: f64,
    pub cooperativity: f64,
    pub time_bin_s: f64,
    pub attenuation_length_km: f64,
    pub w0: u64,
    pub trajectories: usize,
}

impl Default for Figure3Params {
    fn default() -> Self {
        Self {
            eta_t_intrinsic: 0.9,
            eta_0: 0.9,
            eta_1: None,
            eta_d: 0.9,
            cooperativity: 38.0,
            time_bin_s: 30e-9,
            attenuation_length_km: default_attenuation_length_km(),
            w0: 2000,
            trajectories: DEFAULT_TRAJECTORIES,
        }
    }
}

impl Figure3Params {
    /// Reflection efficiency of a coupled qubit on top of the uncoupled loss.
    pub fn eta_1(&self) -> Result<f64> {
        match self.eta_1 {
            Some(eta) => Ok(eta),
            None => Ok(self.eta_0 * reflection_efficiency(self.cooperativity)?),
        }
    }

    /// Emission efficiency used for the double-click reference.
    pub fn dc_emission(&self) -> Result<f64> {
        Ok(self.eta_0 * emission_efficiency(self.cooperativity)?)
    }

    pub fn base_model(&self) -> Result<EfficiencyModel> {
        EfficiencyModel::new(1.0, self.eta_0, self.eta_1()?, self.eta_d, 1)
    }

    pub fn distance(&self, length_km: f64) -> Result<DistanceModel> {
        DistanceModel::new(length_km, self.attenuation_length_km, self.eta_t_intrinsic)
    }

    pub fn experiment(&self, n: usize, k: usize, length_km: f64, seed: u64) -> Result<WindowExperiment> {
        WindowExperiment::new(
            n,
            k,
            self.w0,
            self.time_bin_s,
            self.distance(length_km)?,
            self.base_model()?,
        )?
        .with_trajectories(self.trajectories)
        .map(|e| e.with_seed(seed))
    }

    /// One qubit per double-click attempt, all `n` within `w0` attempts.
    pub fn dc_experiment(&self, n: usize, length_km: f64, seed: u64) -> Result<WindowExperiment> {
        self.experiment(n, 1, length_km, seed)?
            .with_attempt(AttemptKind::DoubleClick {
                eta_s: self.dc_emission()?,
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Curve {
    R,
    DC,
}

impl Curve {
    pub fn label(&self) -> &'static str {
        match self {
            Curve::R => "R",
            Curve::DC => "DC",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Figure3Row {
    pub curve: Curve,
    pub distance_km: f64,
    pub k: usize,
    pub q: usize,
    pub seed: u64,
    pub result: RateResult,
}

/// Monte Carlo, exact single-batch (when `q = 1`) and asymptotic rates of one
/// experiment.
pub fn rate_rows(exp: &WindowExperiment, curve: Curve, length_km: f64) -> Result<Vec<Figure3Row>> {
    let mut results = vec![simulate_window_rate(exp)?];
    if exp.q() == 1 {
        results.push(analytic_q1_rate(exp)?);
    }
    results.push(asymptotic_rate(exp)?);
    Ok(results
        .into_iter()
        .map(|result| Figure3Row {
            curve,
            distance_km: length_km,
            k: exp.k(),
            q: exp.q(),
            seed: exp.seed(),
            result,
        })
        .collect())
}

/// Rates of every batch size in `partitions` at every distance: Monte Carlo,
/// asymptotic, and the exact single-batch value where it applies. Rows are
/// ordered by distance, then batch size, with the double-click curve last.
pub fn figure3_sweep(
    params: &Figure3Params,
    n: usize,
    distances_km: &[f64],
    partitions: &[usize],
    include_dc: bool,
    seed: u64,
) -> Result<Vec<Figure3Row>> {
    if let Some(&k) = partitions.iter().find(|&&k| k == 0 || n % k != 0) {
        return Err(Error::InvalidParameter {
            name: "k",
            value: k as f64,
            reason: "partition must divide n",
        });
    }
    let mut rows = Vec::new();
    for &length in distances_km {
        for &k in partitions {
            rows.extend(rate_rows(&params.experiment(n, k, length, seed)?, Curve::R, length)?);
        }
        if include_dc {
            rows.extend(rate_rows(&params.dc_experiment(n, length, seed)?, Curve::DC, length)?);
        }
    }
    Ok(rows)
}

/// Batch sizes dividing `n`.
pub fn partitions_of(n: usize) -> Vec<usize> {
    (1..=n).filter(|k| n % k == 0).collect()
}

/// First distance at which some batch size above one overtakes the
/// one-qubit-per-attempt rate (Monte Carlo), interpolated linearly in the log
/// of the rate ratio between grid points. `None` if it never happens on the
/// grid.
pub fn crossover_distance(
    params: &Figure3Params,
    n: usize,
    distances_km: &[f64],
    seed: u64,
) -> Result<Option<f64>> {
    let batched: Vec<usize> = partitions_of(n).into_iter().filter(|&k| k > 1).collect();
    let mut previous: Option<(f64, f64)> = None;
    for &length in distances_km {
        let single = simulate_window_rate(&params.experiment(n, 1, length, seed)?)?.rate_hz;
        let mut best = 0.0f64;
        for &k in &batched {
            let exp = params.experiment(n, k, length, seed)?;
            if exp.feasible_window().is_ok() {
                best = best.max(simulate_window_rate(&exp)?.rate_hz);
            }
        }
        let log_ratio = (best / single).ln();
        if log_ratio >= 0.0 {
            return Ok(Some(match previous {
                Some((l0, r0)) => l0 + (length - l0) * (-r0) / (log_ratio - r0),
                None => length,
            }));
        }
        previous = Some((length, log_ratio));
    }
    Ok(None)
}

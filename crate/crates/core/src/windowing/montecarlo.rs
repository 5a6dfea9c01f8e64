//! Sampler for the number of attempts until `q` successes fall inside a
//! sliding window of `w` attempts.
//!
//! A run completes at the first success whose `q − 1` predecessors all lie
//! within the preceding `w − 1` attempts, i.e. when the last `q − 1` gaps
//! between successes sum to at most `w − 1`. Gaps are geometric.
//!
//! Simulating gap by gap is hopeless at low `p`, so the sampler groups gaps
//! into clusters: a cluster starts at a success and runs as long as gaps stay
//! short (`< w`). A cluster with fewer than `q − 1` short gaps cannot
//! complete, and the number of such clusters before a larger one is itself
//! geometric. Their durations are summed exactly when few and by a normal
//! approximation with exact mean and variance when many. Larger clusters are
//! walked gap by gap.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Above this many skipped clusters their total duration is drawn from a
/// normal distribution.
const EXACT_SKIP_LIMIT: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialStatistics {
    pub mean: f64,
    pub stderr: f64,
    pub trajectories: usize,
}

/// Uniform on `(0, 1]`.
fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Precomputed gap distributions for one `(p, q, w)`.
#[derive(Debug, Clone)]
struct GapModel {
    p: f64,
    q: usize,
    w: u64,
    /// `ln(1 − p)`.
    log_fail: f64,
    /// Probability that a gap is short, `1 − (1−p)^{w−1}`.
    short: f64,
    /// Probability that a cluster has at least `q − 1` short gaps.
    big: f64,
    /// Mean and variance of a skipped cluster's duration.
    skip_mean: f64,
    skip_var: f64,
}

impl GapModel {
    fn new(p: f64, q: usize, w: u64) -> Self {
        let log_fail = (-p).ln_1p();
        let short = -((w - 1) as f64 * log_fail).exp_m1();
        let big = short.powi(q as i32 - 1);
        let mut model = Self {
            p,
            q,
            w,
            log_fail,
            short,
            big,
            skip_mean: 0.0,
            skip_var: 0.0,
        };
        if q >= 2 && short > 0.0 && big < 1.0 {
            model.skip_moments();
        }
        model
    }

    fn skip_moments(&mut self) {
        // Short gap conditioned on g ≤ w − 1.
        let r = 1.0 - self.p;
        let (mut z, mut m1, mut m2, mut weight) = (0.0, 0.0, 0.0, 1.0);
        for g in 1..self.w {
            let gf = g as f64;
            z += weight;
            m1 += weight * gf;
            m2 += weight * gf * gf;
            weight *= r;
        }
        let (s_mean, s_var) = (m1 / z, m2 / z - (m1 / z).powi(2));
        // Number of short gaps in a skipped cluster, truncated to 0..=q−2.
        let (mut jz, mut j1, mut j2, mut weight) = (0.0, 0.0, 0.0, 1.0);
        for j in 0..=self.q - 2 {
            let jf = j as f64;
            jz += weight;
            j1 += weight * jf;
            j2 += weight * jf * jf;
            weight *= self.short;
        }
        let (j_mean, j_var) = (j1 / jz, j2 / jz - (j1 / jz).powi(2));
        let long_mean = (self.w - 1) as f64 + 1.0 / self.p;
        let long_var = (1.0 - self.p) / (self.p * self.p);
        self.skip_mean = j_mean * s_mean + long_mean;
        self.skip_var = j_mean * s_var + j_var * s_mean * s_mean + long_var;
    }

    /// Unconditional gap, `≥ 1`.
    fn gap<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if self.p >= 1.0 {
            return 1;
        }
        1 + (open_unit(rng).ln() / self.log_fail).floor() as u64
    }

    /// Gap conditioned on `≤ w − 1`.
    fn short_gap<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if self.p >= 1.0 {
            return 1;
        }
        let u = rng.random::<f64>();
        let g = 1 + ((-u * self.short).ln_1p() / self.log_fail).floor() as u64;
        g.min(self.w - 1)
    }

    /// Gap conditioned on `≥ w`.
    fn long_gap<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.w - 1 + self.gap(rng)
    }

    /// Number of short gaps in a cluster known to have at most `q − 2`.
    fn skipped_cluster_size<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let top = self.q - 2;
        if self.short >= 1.0 {
            return top;
        }
        if self.short <= 0.0 {
            return 0;
        }
        let u = rng.random::<f64>();
        let j = ((-u * (1.0 - self.big)).ln_1p() / self.short.ln()).floor();
        (j as usize).min(top)
    }

    /// Total duration of the clusters skipped before the next large one.
    fn skipped_duration<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.big >= 1.0 {
            return 0.0;
        }
        let count = (open_unit(rng).ln() / (-self.big).ln_1p()).floor();
        if count == 0.0 {
            return 0.0;
        }
        if count <= EXACT_SKIP_LIMIT {
            let mut total = 0u64;
            for _ in 0..count as u64 {
                for _ in 0..self.skipped_cluster_size(rng) {
                    total += self.short_gap(rng);
                }
                total += self.long_gap(rng);
            }
            total as f64
        } else {
            let z: f64 = rng.sample(StandardNormal);
            let total = count * self.skip_mean + z * (count * self.skip_var).sqrt();
            total.round().max(count * self.w as f64)
        }
    }

    /// Attempts up to and including the completing success.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let mut time = self.gap(rng) as f64;
        if self.q == 1 {
            return time;
        }
        let horizon = self.w - 1;
        let mut recent = std::collections::VecDeque::with_capacity(self.q - 1);
        loop {
            time += self.skipped_duration(rng);
            // Large cluster: its first q − 1 gaps are short.
            recent.clear();
            let mut span = 0u64;
            for _ in 0..self.q - 1 {
                let g = self.short_gap(rng);
                recent.push_back(g);
                span += g;
                time += g as f64;
            }
            loop {
                if span <= horizon {
                    return time;
                }
                let g = self.gap(rng);
                time += g as f64;
                if g > horizon {
                    break;
                }
                span += g;
                span -= recent.pop_front().expect("window holds q - 1 gaps");
                recent.push_back(g);
            }
        }
    }
}

fn check_inputs(p: f64, q: usize, w: u64, trajectories: usize) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "attempt success probability must be in (0, 1]",
        });
    }
    if q == 0 {
        return Err(Error::InvalidParameter {
            name: "q",
            value: 0.0,
            reason: "must be positive",
        });
    }
    if (w as u128) < q as u128 {
        return Err(Error::InfeasibleWindow {
            window: w,
            batches: q as u32,
        });
    }
    if trajectories < 2 {
        return Err(Error::InvalidParameter {
            name: "trajectories",
            value: trajectories as f64,
            reason: "at least two trajectories are needed for a standard error",
        });
    }
    Ok(())
}

fn gap_model(p: f64, q: usize, w: u64) -> Result<GapModel> {
    let model = GapModel::new(p, q, w);
    if q >= 2 && model.big == 0.0 {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "window completion probability underflows",
        });
    }
    Ok(model)
}

/// Attempts until completion for one trajectory.
pub fn sample_trials<R: Rng + ?Sized>(p: f64, q: usize, w: u64, rng: &mut R) -> Result<f64> {
    check_inputs(p, q, w, 2)?;
    Ok(gap_model(p, q, w)?.sample(rng))
}

/// Mean attempts until completion over independent trajectories. Trajectory
/// `i` draws from stream `i` of a generator seeded with `seed`, so the
/// result does not depend on thread scheduling.
pub fn simulate_trials(
    p: f64,
    q: usize,
    w: u64,
    trajectories: usize,
    seed: u64,
) -> Result<TrialStatistics> {
    check_inputs(p, q, w, trajectories)?;
    let model = gap_model(p, q, w)?;
    let samples: Vec<f64> = (0..trajectories)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            model.sample(&mut rng)
        })
        .collect();
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(TrialStatistics {
        mean,
        stderr: (var / n).sqrt(),
        trajectories,
    })
}

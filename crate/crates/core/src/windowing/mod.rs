//! Rate of preparing `n = q·k` qubits as `q` batches of `k`, where every
//! batch must still be coherent when the last one arrives.
//!
//! An attempt prepares one batch of `k` qubits with `2^k` time-bins, so it
//! lasts `2^{k−1}` single-qubit attempts (`2^{k−1}·T_TB`). A batch stays
//! usable for `w = ⌊w0/2^{k−1}⌋` attempts.

mod figure3;
mod montecarlo;

pub use figure3::{
    crossover_distance, figure3_sweep, partitions_of, rate_rows, Curve, Figure3Params, Figure3Row,
};
pub use montecarlo::{sample_trials, simulate_trials, TrialStatistics};

use serde::{Deserialize, Serialize};

use crate::efficiency::{DistanceModel, EfficiencyModel};
use crate::error::{check_positive, check_probability, Error, Result};

pub const DEFAULT_TRAJECTORIES: usize = 1000;

/// What one attempt does.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AttemptKind {
    /// Reflection off `k` qubits, success `η_tη_d h^k`.
    Reflection,
    /// Double-click heralding of one qubit, success `η_tη_dη_s/2`.
    DoubleClick { eta_s: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowExperiment {
    n: usize,
    k: usize,
    q: usize,
    w0: u64,
    time_bin_s: f64,
    distance: DistanceModel,
    base_model: EfficiencyModel,
    trajectories: usize,
    seed: u64,
    attempt: AttemptKind,
}

impl WindowExperiment {
    /// Splits `n` qubits into batches of `k`. The transmission of
    /// `base_model` is replaced by the distance model's.
    pub fn new(
        n: usize,
        k: usize,
        w0: u64,
        time_bin_s: f64,
        distance: DistanceModel,
        base_model: EfficiencyModel,
    ) -> Result<Self> {
        if k == 0 || n == 0 || n % k != 0 {
            return Err(Error::InvalidParameter {
                name: "k",
                value: k as f64,
                reason: "batch size must be positive and divide n",
            });
        }
        if w0 == 0 {
            return Err(Error::InvalidParameter {
                name: "w0",
                value: 0.0,
                reason: "must be positive",
            });
        }
        if k > 63 {
            return Err(Error::InvalidParameter {
                name: "k",
                value: k as f64,
                reason: "batch size too large",
            });
        }
        check_positive("time_bin_s", time_bin_s)?;
        Ok(Self {
            n,
            k,
            q: n / k,
            w0,
            time_bin_s,
            distance,
            base_model,
            trajectories: DEFAULT_TRAJECTORIES,
            seed: 0,
            attempt: AttemptKind::Reflection,
        })
    }

    pub fn with_trajectories(mut self, trajectories: usize) -> Result<Self> {
        if trajectories < 2 {
            return Err(Error::InvalidParameter {
                name: "trajectories",
                value: trajectories as f64,
                reason: "need at least two",
            });
        }
        self.trajectories = trajectories;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_attempt(mut self, attempt: AttemptKind) -> Result<Self> {
        if let AttemptKind::DoubleClick { eta_s } = attempt {
            check_probability("eta_s", eta_s)?;
        }
        self.attempt = attempt;
        Ok(self)
    }

    pub fn with_distance(mut self, distance: DistanceModel) -> Self {
        self.distance = distance;
        self
    }

    pub fn with_w0(mut self, w0: u64) -> Result<Self> {
        if w0 == 0 {
            return Err(Error::InvalidParameter {
                name: "w0",
                value: 0.0,
                reason: "must be positive",
            });
        }
        self.w0 = w0;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn w0(&self) -> u64 {
        self.w0
    }

    pub fn time_bin_s(&self) -> f64 {
        self.time_bin_s
    }

    pub fn distance(&self) -> &DistanceModel {
        &self.distance
    }

    pub fn base_model(&self) -> &EfficiencyModel {
        &self.base_model
    }

    pub fn trajectories(&self) -> usize {
        self.trajectories
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn attempt(&self) -> AttemptKind {
        self.attempt
    }

    /// `⌊w0 / 2^{k−1}⌋`.
    pub fn window(&self) -> u64 {
        self.w0 >> (self.k - 1)
    }

    /// Window, or an error when it cannot hold `q` batches.
    pub fn feasible_window(&self) -> Result<u64> {
        let w = self.window();
        if w < self.q as u64 {
            Err(Error::InfeasibleWindow {
                window: w,
                batches: self.q as u32,
            })
        } else {
            Ok(w)
        }
    }

    /// `2^{k−1}·T_TB`.
    pub fn attempt_duration_s(&self) -> f64 {
        (1u64 << (self.k - 1)) as f64 * self.time_bin_s
    }

    /// Efficiency model of one batch at this distance.
    pub fn batch_model(&self) -> Result<EfficiencyModel> {
        self.base_model
            .with_n(self.k)?
            .with_eta_t(self.distance.eta_t())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateMethod {
    MonteCarlo,
    AnalyticQ1,
    Asymptotic,
}

impl RateMethod {
    pub fn label(&self) -> &'static str {
        match self {
            RateMethod::MonteCarlo => "monte-carlo",
            RateMethod::AnalyticQ1 => "analytic-q1",
            RateMethod::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateResult {
    /// Mean number of attempts per completed preparation.
    pub mean_trials: f64,
    pub rate_hz: f64,
    /// Standard error of `rate_hz`; Monte Carlo only.
    pub stderr: Option<f64>,
    /// Standard error of `mean_trials`; Monte Carlo only.
    pub mean_trials_stderr: Option<f64>,
    pub method: RateMethod,
}

/// Success probability of one attempt.
pub fn attempt_success_probability(exp: &WindowExperiment) -> Result<f64> {
    let eta_t = exp.distance.eta_t();
    match exp.attempt {
        AttemptKind::Reflection => exp.batch_model()?.ideal_success_probability(),
        AttemptKind::DoubleClick { eta_s } => Ok(eta_t * exp.base_model.eta_d() * eta_s / 2.0),
    }
}

/// Probability that a fixed block of `w` attempts holds at least `q`
/// successes.
pub fn per_window_success_probability(exp: &WindowExperiment) -> Result<f64> {
    let w = exp.feasible_window()?;
    let p = attempt_success_probability(exp)?;
    Ok(binomial_tail(w, exp.q as u64, p))
}

/// `P(Bin(w, p) ≥ q)`.
pub fn binomial_tail(w: u64, q: u64, p: f64) -> f64 {
    if q == 0 {
        return 1.0;
    }
    if p >= 1.0 {
        return if q <= w { 1.0 } else { 0.0 };
    }
    if p <= 0.0 {
        return 0.0;
    }
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    let wf = w as f64;
    // Sum the lower tail when q is small compared with the mean.
    let log_term = |i: u64| ln_binomial(w, i) + i as f64 * lp + (wf - i as f64) * lq;
    if (q as f64) <= wf * p {
        let lower: f64 = (0..q).map(|i| log_term(i).exp()).sum();
        (1.0 - lower).max(0.0)
    } else {
        (q..=w)
            .map(log_term)
            .take_while(|t| t.is_finite())
            .map(f64::exp)
            .take_while(|&t| t > 0.0)
            .sum::<f64>()
            .min(1.0)
    }
}

fn ln_binomial(m: u64, r: u64) -> f64 {
    let r = r.min(m - r);
    (0..r).map(|i| ((m - i) as f64 / (i + 1) as f64).ln()).sum()
}

/// `C(m, r)` in floating point.
pub fn binomial(m: u64, r: u64) -> f64 {
    if r > m {
        return 0.0;
    }
    let r = r.min(m - r);
    (0..r).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

/// Monte Carlo estimate over `exp.trajectories()` trajectories.
pub fn simulate_window_rate(exp: &WindowExperiment) -> Result<RateResult> {
    let w = exp.feasible_window()?;
    let p = attempt_success_probability(exp)?;
    if p <= 0.0 {
        return Err(Error::DegenerateEfficiency(
            "attempt success probability is zero".to_string(),
        ));
    }
    let stats = simulate_trials(p, exp.q, w, exp.trajectories, exp.seed)?;
    let duration = exp.attempt_duration_s();
    let rate = 1.0 / (stats.mean * duration);
    Ok(RateResult {
        mean_trials: stats.mean,
        rate_hz: rate,
        stderr: Some(rate * stats.stderr / stats.mean),
        mean_trials_stderr: Some(stats.stderr),
        method: RateMethod::MonteCarlo,
    })
}

/// Exact rate for a single batch: `p/(2^{k−1}T_TB)`.
pub fn analytic_q1_rate(exp: &WindowExperiment) -> Result<RateResult> {
    if exp.q != 1 {
        return Err(Error::InvalidParameter {
            name: "q",
            value: exp.q as f64,
            reason: "analytic rate needs a single batch",
        });
    }
    exp.feasible_window()?;
    let p = attempt_success_probability(exp)?;
    Ok(RateResult {
        mean_trials: 1.0 / p,
        rate_hz: p / exp.attempt_duration_s(),
        stderr: None,
        mean_trials_stderr: None,
        method: RateMethod::AnalyticQ1,
    })
}

/// Low-probability rate `p^q C(w−1, q−1)/(2^{k−1}T_TB)`: a success completes
/// the run when `q − 1` of the preceding `w − 1` attempts succeeded.
pub fn asymptotic_rate(exp: &WindowExperiment) -> Result<RateResult> {
    let w = exp.feasible_window()?;
    let p = attempt_success_probability(exp)?;
    let per_attempt = p.powi(exp.q as i32) * binomial(w - 1, exp.q as u64 - 1);
    let rate = per_attempt / exp.attempt_duration_s();
    Ok(RateResult {
        mean_trials: 1.0 / per_attempt,
        rate_hz: rate,
        stderr: None,
        mean_trials_stderr: None,
        method: RateMethod::Asymptotic,
    })
}

fn check_comparable(exp_q: &WindowExperiment, exp_n: &WindowExperiment) -> Result<()> {
    if exp_q.n != exp_n.n || exp_q.w0 != exp_n.w0 || exp_q.time_bin_s != exp_n.time_bin_s {
        return Err(Error::Contract(
            "multiplexing compares experiments with equal n, w0 and T_TB".to_string(),
        ));
    }
    if exp_n.k != 1 {
        return Err(Error::Contract(
            "reference experiment must prepare one qubit per attempt".to_string(),
        ));
    }
    Ok(())
}

/// Ratio of asymptotic rates, batched over one-qubit-per-attempt.
pub fn multiplexing_advantage(exp_q: &WindowExperiment, exp_n: &WindowExperiment) -> Result<f64> {
    check_comparable(exp_q, exp_n)?;
    Ok(asymptotic_rate(exp_q)?.rate_hz / asymptotic_rate(exp_n)?.rate_hz)
}

/// Same ratio written out: `(η_tη_d)^{q−n} 2^{1−k} C(w−1, q−1)/C(w0−1, n−1)`
/// for reflection attempts with identical efficiencies.
pub fn multiplexing_advantage_closed_form(
    exp_q: &WindowExperiment,
    exp_n: &WindowExperiment,
) -> Result<f64> {
    check_comparable(exp_q, exp_n)?;
    let w = exp_q.feasible_window()?;
    exp_n.feasible_window()?;
    let td = exp_q.distance.eta_t() * exp_q.base_model.eta_d();
    let power = exp_q.q as i32 - exp_q.n as i32;
    Ok(td.powi(power) * 2f64.powi(1 - exp_q.k as i32) * binomial(w - 1, exp_q.q as u64 - 1)
        / binomial(exp_n.w0 - 1, exp_n.n as u64 - 1))
}

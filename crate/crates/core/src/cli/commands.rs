//! Command implementations. Every command validates its whole parameter set
//! before running anything expensive and returns a result table.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{
    AttemptChoice, Command, ExperimentConfig, FidelityParams, Fig2Params, Fig3Params, StatevecParams,
    TradeoffParams, WindowHardware, WindowParams,
};
use super::output::{Cell, Table};
use super::CliError;
use crate::cavity::{emission_efficiency, reflection_efficiency};
use crate::efficiency::EfficiencyModel;
use crate::error::{check_probability, Error};
use crate::imperfections::{
    fidelity_estimate, fidelity_lower_bound, herald_probability, ideal_branch_fraction,
    single_photon_fraction, threshold_detector_bound, wcp_amplitudes, WcpSource,
};
use crate::quantum::{apply_corrections, run_ideal_protocol, run_reversed_protocol, TargetState};
use crate::tradeoff::{
    dc_merit, r_tradeoff_merit, sc_merit, success_probability_comparison, sweep_figure2, Protocol,
    Regime,
};
use crate::windowing::{
    figure3_sweep, partitions_of, rate_rows, Curve, Figure3Params, Figure3Row, WindowExperiment,
};

/// Output of a command: the table plus an optional one-line summary.
pub struct CommandOutput {
    pub table: Table,
    pub summary: Option<String>,
}

impl From<Table> for CommandOutput {
    fn from(table: Table) -> Self {
        Self {
            table,
            summary: None,
        }
    }
}

pub fn execute(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    match cfg.command {
        Command::Tradeoff => tradeoff(cfg).map(Into::into),
        Command::Fidelity => fidelity(cfg).map(Into::into),
        Command::StatevecCheck => statevec_check(cfg),
        Command::Window => window(cfg).map(Into::into),
        Command::Fig2 => fig2(cfg).map(Into::into),
        Command::Fig3 => fig3(cfg).map(Into::into),
    }
}

fn coupled_efficiency(eta_1: Option<f64>, eta_0: f64, cooperativity: f64) -> Result<f64, Error> {
    match eta_1 {
        Some(v) => Ok(v),
        None => Ok(eta_0 * reflection_efficiency(cooperativity)?),
    }
}

fn tradeoff(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let p: TradeoffParams = cfg.params()?;
    let eta_1 = coupled_efficiency(p.eta_1, p.eta_0, p.cooperativity)?;
    let eta_s = match p.eta_s {
        Some(v) => check_probability("eta_s", v)?,
        None => p.eta_0 * emission_efficiency(p.cooperativity)?,
    };
    check_probability("reference_p", p.reference_p)?;
    let model = EfficiencyModel::new(p.eta_t, p.eta_0, eta_1, p.eta_d, 1)?;
    let success = success_probability_comparison(&model, eta_s, p.one_photon)?;

    let mut table = Table::new(vec![
        "protocol",
        "merit",
        "success_probability",
        "reference_p",
        "fidelity_at_reference",
    ]);
    for protocol in [Protocol::R, Protocol::SC, Protocol::DC, Protocol::RIntensity] {
        let merit = match protocol {
            Protocol::R => Some(r_tradeoff_merit(&model)?),
            Protocol::SC => Some(sc_merit(eta_s)?),
            Protocol::DC => Some(dc_merit(eta_s)?),
            Protocol::RIntensity => None,
        };
        table.push(vec![
            protocol.label().into(),
            merit.map_or(Cell::Empty, Cell::Merit),
            success.get(protocol).into(),
            p.reference_p.into(),
            merit.map(|m| m.fidelity_at(p.reference_p)).into(),
        ]);
    }
    Ok(table)
}

fn fidelity(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let p: FidelityParams = cfg.params()?;
    let eta_1 = coupled_efficiency(p.eta_1, p.eta_0, p.cooperativity)?;
    let model = EfficiencyModel::new(p.eta_t, p.eta_0, eta_1, p.eta_d, p.n)?;
    model.ideal_success_probability()?;
    let pulses = p
        .mean_photon_numbers
        .iter()
        .map(|&mu| {
            wcp_amplitudes(&WcpSource::with_mean_photon_number(mu)?)?.with_epsilon(p.epsilon)
        })
        .collect::<Result<Vec<_>, Error>>()?;

    let mut table = Table::new(vec![
        "mean_photon_number",
        "herald_probability",
        "single_photon_fraction",
        "ideal_branch_fraction",
        "fidelity_lower_bound",
        "fidelity_estimate",
        "threshold_herald_probability",
        "threshold_fidelity_bound",
    ]);
    for (&mu, pulse) in p.mean_photon_numbers.iter().zip(&pulses) {
        let (p_thr, f_thr) = threshold_detector_bound(pulse, &model)?;
        table.push(vec![
            mu.into(),
            herald_probability(pulse, &model)?.into(),
            single_photon_fraction(pulse, &model)?.into(),
            ideal_branch_fraction(pulse, &model)?.into(),
            fidelity_lower_bound(pulse, &model)?.into(),
            fidelity_estimate(pulse, &model)?.into(),
            p_thr.into(),
            f_thr.into(),
        ]);
    }
    Ok(table)
}

fn statevec_check(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let p: StatevecParams = cfg.params()?;
    let model = EfficiencyModel::new(p.eta_t, p.eta_0, p.eta_1, p.eta_d, p.n)?;
    crate::quantum::RegisterState::plus(p.n)?;
    if p.trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            value: 0.0,
            reason: "must be positive",
        }
        .into());
    }

    let mut table = Table::new(vec![
        "trial",
        "n",
        "ports",
        "max_infidelity",
        "reversed_max_infidelity",
        "total_probability",
    ]);
    let mut worst = 0.0f64;
    for trial in 0..p.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(trial as u64);
        let target = TargetState::random(p.n, &mut rng)?;
        let want = target.statevector();
        let infidelity = |outcomes: &[crate::quantum::HeraldOutcome]| {
            outcomes
                .iter()
                .map(|o| 1.0 - apply_corrections(o).fidelity(&want))
                .fold(0.0f64, f64::max)
        };
        let forward = run_ideal_protocol(&model, &target)?;
        let reversed = run_reversed_protocol(&model, &target)?;
        let (f, r) = (infidelity(&forward), infidelity(&reversed));
        worst = worst.max(f).max(r);
        table.push(vec![
            trial.into(),
            p.n.into(),
            forward.len().into(),
            f.into(),
            r.into(),
            forward.iter().map(|o| o.probability).sum::<f64>().into(),
        ]);
    }
    Ok(CommandOutput {
        table,
        summary: Some(format!("max_infidelity={worst:.3e}")),
    })
}

fn hardware(h: &WindowHardware, w0: u64) -> Figure3Params {
    Figure3Params {
        eta_t_intrinsic: h.eta_t_intrinsic,
        eta_0: h.eta_0,
        eta_1: h.eta_1,
        eta_d: h.eta_d,
        cooperativity: h.cooperativity,
        time_bin_s: h.time_bin_s,
        attenuation_length_km: h.attenuation_length_km,
        w0,
        trajectories: h.trajectories,
    }
}

fn rate_table(rows: &[Figure3Row]) -> Table {
    let mut table = Table::new(vec![
        "distance_km",
        "k",
        "q",
        "method",
        "rate_hz",
        "stderr",
        "mean_trials",
        "seed",
        "curve",
    ]);
    for row in rows {
        table.push(vec![
            row.distance_km.into(),
            row.k.into(),
            row.q.into(),
            row.result.method.label().into(),
            row.result.rate_hz.into(),
            row.result.stderr.into(),
            row.result.mean_trials.into(),
            row.seed.into(),
            row.curve.label().into(),
        ]);
    }
    table
}

fn batch_size(p: &WindowParams) -> Result<usize, Error> {
    let bad = |value: usize| Error::InvalidParameter {
        name: "q",
        value: value as f64,
        reason: "batch count must divide n and agree with k",
    };
    match (p.k, p.q) {
        (Some(k), None) => Ok(k),
        (None, Some(q)) if q > 0 && p.n % q == 0 => Ok(p.n / q),
        (None, Some(q)) => Err(bad(q)),
        (Some(k), Some(q)) if k * q == p.n => Ok(k),
        (Some(_), Some(q)) => Err(bad(q)),
        (None, None) => Ok(1),
    }
}

fn window(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let p: WindowParams = cfg.params()?;
    let k = batch_size(&p)?;
    let hw = hardware(&p.hardware, p.w0);
    let experiments = p
        .distances_km
        .iter()
        .map(|&length| {
            let exp = match p.attempt {
                AttemptChoice::Reflection => hw.experiment(p.n, k, length, cfg.seed)?,
                AttemptChoice::DoubleClick => {
                    if k != 1 {
                        return Err(Error::InvalidParameter {
                            name: "k",
                            value: k as f64,
                            reason: "double-click attempts prepare one qubit",
                        });
                    }
                    hw.dc_experiment(p.n, length, cfg.seed)?
                }
            };
            exp.feasible_window()?;
            Ok((length, exp))
        })
        .collect::<Result<Vec<(f64, WindowExperiment)>, Error>>()?;
    let curve = match p.attempt {
        AttemptChoice::Reflection => Curve::R,
        AttemptChoice::DoubleClick => Curve::DC,
    };
    let mut rows = Vec::new();
    for (length, exp) in &experiments {
        rows.extend(rate_rows(exp, curve, *length)?);
    }
    Ok(rate_table(&rows))
}

fn fig2(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let p: Fig2Params = cfg.params()?;
    let regime = Regime::parse(&p.regime).ok_or_else(|| {
        CliError::Config(format!("parameters.regime: expected \"a\" or \"b\", got {:?}", p.regime))
    })?;
    let grid = p.grid.unwrap_or_else(|| regime.default_grid());
    let points = sweep_figure2(regime, &grid, p.reference_p)?;
    let mut table = Table::new(vec![
        "regime",
        "sweep_parameter",
        "protocol",
        "merit",
        "success_probability",
        "fidelity",
    ]);
    for pt in points {
        table.push(vec![
            pt.regime.label().into(),
            pt.sweep_parameter.into(),
            pt.protocol.label().into(),
            pt.merit.into(),
            pt.success_probability.into(),
            pt.fidelity.into(),
        ]);
    }
    Ok(table)
}

fn fig3(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let p: Fig3Params = cfg.params()?;
    let hw = hardware(&p.hardware, p.w0);
    let partitions = p.partitions.clone().unwrap_or_else(|| partitions_of(p.n));
    for &length in &p.distances_km {
        for &k in &partitions {
            hw.experiment(p.n, k, length, cfg.seed)?.feasible_window()?;
        }
        if p.include_dc {
            hw.dc_experiment(p.n, length, cfg.seed)?;
        }
    }
    let rows = figure3_sweep(&hw, p.n, &p.distances_km, &partitions, p.include_dc, cfg.seed)?;
    Ok(rate_table(&rows))
}

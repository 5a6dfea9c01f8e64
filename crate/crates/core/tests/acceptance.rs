//! Acceptance checks, one line per criterion.
//!
//! Run with `cargo test --test acceptance`. Failing criteria are reported
//! on stdout; set `ACCEPTANCE_STRICT=1` to also exit nonzero.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rrsp::cavity::{reflection_efficiency, tuned_outcoupling, CavityParams};
use rrsp::efficiency::EfficiencyModel;
use rrsp::imperfections::{
    fidelity_estimate, fidelity_lower_bound, herald_probability, wcp_amplitudes, BranchEnsemble,
    ClientPulse, WcpSource,
};
use rrsp::quantum::{
    apply_corrections, correct_absorption_signs, run_absorption_oracle, run_ideal_protocol,
    TargetState,
};
use rrsp::tradeoff::{dc_merit, r_tradeoff_merit, sc_merit, sc_tradeoff, Regime};
use rrsp::windowing::{
    asymptotic_rate, attempt_success_probability, crossover_distance, per_window_success_probability,
    simulate_trials, simulate_window_rate, Figure3Params,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn lib<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn within_budget(elapsed: Duration, budget_s: f64) -> Result<(), String> {
    ensure(
        elapsed.as_secs_f64() < budget_s,
        format!("took {:.2}s, budget {budget_s}s", elapsed.as_secs_f64()),
    )
}

fn c1_closed_form_success() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(1..=8usize);
        let mut eta = || rng.random_range(0.05..=1.0f64);
        let (t, e0, e1, d) = (eta(), eta(), eta(), eta());
        let model = lib(EfficiencyModel::new(t, e0, e1, d, n))?;
        let closed = lib(model.ideal_success_probability())?;

        // η_x from the bit pattern, |c_x|² from the library's balanced amplitudes.
        let eta_x = |x: usize| t * d * (0..n).map(|l| if x >> l & 1 == 1 { e1 } else { e0 }).product::<f64>();
        let weights = lib(model.balanced_amplitudes(&vec![0.3; n]))?.weights();
        let brute: f64 = weights.iter().enumerate().map(|(x, w)| w * eta_x(x)).sum();
        // Same sum with |c_x|² ∝ 1/η_x built by hand.
        let inv: f64 = (0..1usize << n).map(|x| 1.0 / eta_x(x)).sum();
        let by_hand: f64 = (0..1usize << n).map(|x| (1.0 / eta_x(x)) / inv * eta_x(x)).sum();
        worst = worst.max((closed - brute).abs()).max((closed - by_hand).abs());
    }
    ensure(worst <= 1e-12, format!("max |ΔP| = {worst:.3e}"))?;
    within_budget(start.elapsed(), 1.0)?;
    Ok(format!("max |ΔP| = {worst:.3e} over 100 draws in {:.3}s", start.elapsed().as_secs_f64()))
}

fn c2_ideal_protocol() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut ports = 0usize;
    for n in 1..=6 {
        let model = lib(EfficiencyModel::lossless(n))?;
        for _ in 0..20 {
            let target = lib(TargetState::random(n, &mut rng))?;
            let want = target.statevector();
            let outcomes = lib(run_ideal_protocol(&model, &target))?;
            ensure(outcomes.len() == 1 << n, format!("n={n}: {} ports", outcomes.len()))?;
            for o in &outcomes {
                worst = worst.max(1.0 - apply_corrections(o).fidelity(&want));
                ports += 1;
            }
        }
    }
    ensure(worst <= 1e-9, format!("max infidelity {worst:.3e}"))?;
    within_budget(start.elapsed(), 30.0)?;
    Ok(format!(
        "max infidelity {worst:.3e} over {ports} ports in {:.2}s",
        start.elapsed().as_secs_f64()
    ))
}

fn c3_absorption_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for n in 1..=5 {
        let model = lib(EfficiencyModel::lossless(n))?;
        for _ in 0..50 {
            let target = lib(TargetState::random(n, &mut rng))?;
            let sigma: Vec<bool> = (0..1usize << n).map(|_| rng.random()).collect();
            let raw = lib(run_absorption_oracle(&target, &sigma))?;
            let fixed = lib(correct_absorption_signs(&raw, &sigma))?;
            let reflected = lib(run_ideal_protocol(&model, &target))?;
            let port = rng.random_range(0..reflected.len());
            worst = worst.max(fixed.distance_up_to_phase(&apply_corrections(&reflected[port])));
        }
    }
    ensure(worst <= 1e-9, format!("max distance {worst:.3e}"))?;
    Ok(format!("max state distance {worst:.3e} over 250 draws"))
}

fn c4_cavity() -> Outcome {
    let mut worst = 0.0f64;
    for c in [0.1, 1.0, 10.0, 38.0, 100.0] {
        let cavity = lib(CavityParams::tuned(c, 1.0, 0.5))?;
        ensure(
            (cavity.kappa_out_ratio() - (c + 1.0) / (c + 2.0)).abs() < 1e-15
                && tuned_outcoupling(c) == cavity.kappa_out_ratio(),
            "outcoupling",
        )?;
        let want = Complex64::new(c / (c + 2.0), 0.0);
        let r0 = cavity.transfer_function(false, 0.0);
        let r1 = cavity.transfer_function(true, 0.0);
        worst = worst.max((r0 - want).norm()).max((r1 + want).norm());
    }
    ensure(worst <= 1e-12, format!("max |Δr| = {worst:.3e}"))?;
    let eta_1 = lib(reflection_efficiency(38.0))?;
    ensure(eta_1 == 0.9025, format!("eta_1(38) = {eta_1:.17}"))?;
    Ok(format!("max |Δr| = {worst:.3e}; eta_1(38) = {eta_1}"))
}

fn c5_branch_conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut dp, mut df) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let n = rng.random_range(1..=4usize);
        let mut eta = || rng.random_range(0.05..=1.0f64);
        let model = lib(EfficiencyModel::new(eta(), eta(), eta(), eta(), n))?;
        let p1 = rng.random_range(0.0..0.9f64);
        let p2 = rng.random_range(0.0..(1.0 - p1) * 0.5);
        let eps = rng.random_range(0.0..0.1f64);
        let pulse = lib(ClientPulse::from_populations(p1.max(1e-3), p2, eps))?;
        let ens = lib(BranchEnsemble::enumerate(&pulse, &model))?;
        let p = lib(herald_probability(&pulse, &model))?;
        dp = dp.max((p - ens.herald_weight()).abs());
        let bound = lib(fidelity_lower_bound(&pulse, &model))?;
        let ratio = (1.0 - eps) * ens.faithful_weight() / ens.herald_weight();
        df = df.max((bound - ratio).abs());
    }
    ensure(dp <= 1e-12 && df <= 1e-12, format!("|ΔP| {dp:.3e}, |ΔF| {df:.3e}"))?;
    Ok(format!("max |ΔP| = {dp:.3e}, max |ΔF_lb| = {df:.3e} over 100 points"))
}

/// Least-squares slope of `y` against `x`.
fn fitted_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn c6_tradeoff_slope() -> Outcome {
    let mut worst = 0.0f64;
    for &(t, e0, e1, d) in &[
        (1.0, 0.9, 0.81225, 0.9),
        (1.0, 1.0, 0.9025, 1.0),
        (0.3, 0.95, 0.6, 0.8),
        (0.05, 0.7, 0.7, 1.0),
        (0.8, 0.5, 0.99, 0.6),
    ] {
        let model = lib(EfficiencyModel::new(t, e0, e1, d, 1))?;
        let (mut ps, mut infid) = (Vec::new(), Vec::new());
        for i in 0..40 {
            let mu = 10f64.powf(-7.0 + i as f64 * 0.1);
            let pulse = lib(wcp_amplitudes(&lib(WcpSource::with_mean_photon_number(mu))?))?;
            let p = lib(herald_probability(&pulse, &model))?;
            if p <= 1e-3 {
                ps.push(p);
                infid.push(1.0 - lib(fidelity_estimate(&pulse, &model))?);
            }
        }
        ensure(ps.len() >= 10, "too few points below P = 1e-3")?;
        let want = 0.25 * (1.0 / (e0 * d) - 2.0 * e1 / (e0 + e1));
        let rel = (fitted_slope(&ps, &infid) / want - 1.0).abs();
        worst = worst.max(rel);
    }
    ensure(worst < 0.01, format!("max relative slope error {worst:.3e}"))?;
    Ok(format!("max relative slope error {worst:.3e} over 5 hardware points"))
}

fn c7_regimes() -> Outcome {
    let p = 1e-3;
    let mut worst = 0.0f64;
    for i in 1..=9 {
        let eta = i as f64 / 10.0;
        let (eta_s, model) = lib(Regime::RoutingLimited.operating_point(eta))?;
        // P/(1−F) is the inverse infidelity slope; read it from the closed
        // forms rather than subtracting fidelities near one.
        let ratio_r = lib(r_tradeoff_merit(&model))?.value().ok_or("divergent R merit")?;
        let ratio_sc = 8.0 * eta_s / (1.0 - eta_s);
        let sc_check = (1.0 - lib(sc_tradeoff(p, eta_s))?) / p * ratio_sc;
        ensure((sc_check - 1.0).abs() < 1e-9, format!("SC tradeoff slope at eta={eta}"))?;
        worst = worst.max((ratio_r / (0.5 * ratio_sc) - 1.0).abs());
    }
    ensure(worst <= 1e-12, format!("regime (a) relative error {worst:.3e}"))?;

    let merits = |c: f64| -> Result<(f64, f64, f64), String> {
        let (eta_s, model) = lib(Regime::InterfaceLimited.operating_point(c))?;
        let v = |m: rrsp::tradeoff::Merit| m.value().ok_or_else(|| "divergent merit".to_string());
        Ok((
            v(lib(r_tradeoff_merit(&model))?)?,
            v(lib(sc_merit(eta_s))?)?,
            v(lib(dc_merit(eta_s))?)?,
        ))
    };
    let (r, sc, dc) = merits(0.1)?;
    ensure(r > sc && r > dc, format!("C=0.1: R {r:.4e}, SC {sc:.4e}, DC {dc:.4e}"))?;
    let (r_hi, _, dc_hi) = merits(1e6)?;
    let ratio = r_hi / dc_hi;
    ensure((ratio - 1.0).abs() < 0.01, format!("C=1e6: R/DC = {ratio:.6}"))?;
    Ok(format!(
        "regime (a) max rel err {worst:.1e}; C=0.1 R/SC = {:.3}, R/DC = {:.3}; C=1e6 R/DC = {ratio:.6}",
        r / sc,
        r / dc
    ))
}

/// Expected attempts to completion from the absorbing Markov chain over the
/// last `w − 1` outcomes.
fn markov_mean_trials(p: f64, q: usize, w: u64) -> f64 {
    let bits = (w - 1) as usize;
    let states = 1usize << bits;
    let mask = states - 1;
    // Fixed-point iteration E = 1 + Q E; converges since the chain is absorbing.
    let mut e = vec![0.0f64; states];
    for _ in 0..100_000 {
        let next: Vec<f64> = (0..states)
            .map(|s| {
                let miss = (1.0 - p) * e[(s << 1) & mask];
                let hit = if (s.count_ones() as usize) + 1 >= q {
                    0.0
                } else {
                    p * e[((s << 1) | 1) & mask]
                };
                1.0 + miss + hit
            })
            .collect();
        let delta = next.iter().zip(&e).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        e = next;
        if delta < 1e-13 {
            break;
        }
    }
    e[0]
}

fn c8_window_exactness() -> Outcome {
    let mut notes = Vec::new();
    for (i, &p) in [0.9, 0.5, 0.1, 0.01].iter().enumerate() {
        let s = lib(simulate_trials(p, 1, 2000, 1000, 80 + i as u64))?;
        let z = (s.mean - 1.0 / p) / s.stderr;
        ensure(z.abs() < 3.0, format!("q=1 p={p}: mean {:.4} vs {:.4} ({z:.2} se)", s.mean, 1.0 / p))?;
        notes.push(format!("p={p}: {z:+.2}se"));
    }
    let exact = markov_mean_trials(0.5, 2, 2);
    let s = lib(simulate_trials(0.5, 2, 2, 1000, 88))?;
    let z = (s.mean - exact) / s.stderr;
    ensure(z.abs() < 3.0, format!("Markov: MC {:.4} vs exact {exact:.4} ({z:.2} se)", s.mean))?;
    Ok(format!("{}; Markov(p=0.5,q=2,w=2) exact {exact:.4}, MC {z:+.2}se", notes.join(", ")))
}

fn c9_figure3() -> Outcome {
    let start = Instant::now();
    let params = Figure3Params::default();
    let seed = 9;
    let mut failures = Vec::new();

    // Convergence to the asymptotic formula wherever a fixed window rarely
    // succeeds.
    let mut checked = 0;
    let mut ratios = Vec::new();
    for k in [1usize, 2, 4, 8] {
        for l in (0..=300).step_by(25) {
            let exp = lib(params.experiment(8, k, l as f64, seed))?;
            if exp.feasible_window().is_err() {
                continue;
            }
            let pw = lib(per_window_success_probability(&exp))?;
            if pw >= 1e-3 {
                continue;
            }
            let mc = lib(simulate_window_rate(&exp))?.rate_hz;
            let asym = lib(asymptotic_rate(&exp))?.rate_hz;
            let ratio = mc / asym;
            checked += 1;
            ratios.push(ratio);
            if !(0.8..=1.25).contains(&ratio) {
                let p = lib(attempt_success_probability(&exp))?;
                failures.push(format!(
                    "k={k} L={l}km: MC/asym = {ratio:.3} (per-window {pw:.1e}, p*w = {:.2})",
                    p * exp.window() as f64
                ));
            }
        }
    }
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| (a.min(r), b.max(r)));

    // Ordering at zero distance.
    let rate = |k: usize, l: f64| -> Result<f64, String> {
        Ok(lib(simulate_window_rate(&lib(params.experiment(8, k, l, seed))?))?.rate_hz)
    };
    let at_zero: Vec<f64> = [1, 2, 4, 8].iter().map(|&k| rate(k, 0.0)).collect::<Result<_, _>>()?;
    if !at_zero[1..].iter().all(|&r| r < at_zero[0]) {
        failures.push(format!("k=1 not fastest at L=0: {at_zero:?}"));
    }

    // Batched preparation dominates at long distance.
    let far = 200.0;
    let single = rate(1, far)?;
    let best_batched = [2, 4, 8]
        .iter()
        .map(|&k| rate(k, far))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let advantage = best_batched / single;
    if advantage < 10.0 {
        failures.push(format!("batched advantage at {far}km only {advantage:.2}"));
    }

    // Crossover moves out for fewer qubits.
    let grid: Vec<f64> = (0..=60).map(|i| i as f64 * 5.0).collect();
    let x8 = lib(crossover_distance(&params, 8, &grid, seed))?;
    let x2 = lib(crossover_distance(&params, 2, &grid, seed))?;
    match (x8, x2) {
        (Some(a), Some(b)) if b > a => {}
        _ => failures.push(format!("crossover n=8 {x8:?} vs n=2 {x2:?}")),
    }

    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 600.0 {
        failures.push(format!("runtime {elapsed:.1}s"));
    }
    let summary = format!(
        "{checked} points with per-window success < 1e-3, MC/asym in [{lo:.3}, {hi:.3}]; \
         L=0 rates k=1,2,4,8 {:.3e}/{:.3e}/{:.3e}/{:.3e} Hz; batched/k=1 at {far}km = {advantage:.2e}; \
         crossover n=8 {:.1}km, n=2 {:.1}km; {elapsed:.1}s",
        at_zero[0],
        at_zero[1],
        at_zero[2],
        at_zero[3],
        x8.unwrap_or(f64::NAN),
        x2.unwrap_or(f64::NAN),
    );
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}\n    {}", failures.join("\n    ")))
    }
}

fn c10_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_rrsp"))
            .args(["fig3", "--n", "8", "--w0", "2000", "--seed", "42", "--distances", "0,60,120,180"])
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), String::from_utf8_lossy(&status.stderr).to_string())?;
        std::fs::read(&out).map_err(|e| e.to_string())
    };
    let a = run("a.csv")?;
    let b = run("b.csv")?;
    ensure(!a.is_empty() && a == b, "fig3 outputs differ")?;
    Ok(format!("two fig3 runs, {} bytes each, identical", a.len()))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, c1_closed_form_success),
        (2, c2_ideal_protocol),
        (3, c3_absorption_oracle),
        (4, c4_cavity),
        (5, c5_branch_conservation),
        (6, c6_tradeoff_slope),
        (7, c7_regimes),
        (8, c8_window_exactness),
        (9, c9_figure3),
        (10, c10_determinism),
    ];
    let mut failed = Vec::new();
    for (id, check) in criteria {
        let result = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match result {
            Ok(detail) => println!("criterion {id}: PASS  {detail}"),
            Err(detail) => {
                println!("criterion {id}: FAIL  {detail}");
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        // Report-only by default; ACCEPTANCE_STRICT=1 turns failures into a
        // nonzero exit.
        if std::env::var_os("ACCEPTANCE_STRICT").is_some_and(|v| v != "0") {
            std::process::exit(1);
        }
    }
}

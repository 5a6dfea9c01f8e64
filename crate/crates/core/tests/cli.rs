use std::path::Path;
use std::process::{Command, Output};

use rrsp::cli::ExperimentConfig;

fn rrsp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rrsp"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn error_kind(out: &Output) -> String {
    let line = String::from_utf8_lossy(&out.stderr);
    let v: serde_json::Value = serde_json::from_str(line.trim()).expect("stderr is a JSON record");
    v["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn manifest_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        "command = \"window\"\nseed = 5\noutput_path = \"rates.csv\"\n\
         [parameters]\nn = 4\nk = 2\ndistances_km = [0.0, 50.0]\n\
         [parameters.hardware]\ntrajectories = 200\n",
    )
    .unwrap();
    let out = rrsp(&["--config", "run.toml", "--w0", "500"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("rates.csv.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "window");
    assert_eq!(manifest["seed"], 5);
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
    assert!(manifest["wall_clock_s"].as_f64().unwrap() >= 0.0);

    let echo = ExperimentConfig::from_toml(manifest["config"].as_str().unwrap()).unwrap();
    assert_eq!(echo.parameters["w0"].as_integer(), Some(500));
    assert_eq!(ExperimentConfig::from_toml(&echo.to_toml()).unwrap(), echo);

    // Re-running the echoed config reproduces the output.
    let first = std::fs::read(dir.path().join("rates.csv")).unwrap();
    std::fs::write(&config, echo.to_toml()).unwrap();
    assert!(rrsp(&["--config", "run.toml"], dir.path()).status.success());
    assert_eq!(std::fs::read(dir.path().join("rates.csv")).unwrap(), first);

    let text = String::from_utf8(first).unwrap();
    let rows = text.lines().count() - 1;
    assert_eq!(manifest["rows"], rows);
    assert!(text.starts_with("distance_km,k,q,method,rate_hz,stderr,mean_trials,seed,curve\n"));
}

#[test]
fn fig3_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["fig3", "--n", "4", "--distances", "0,100", "--trajectories", "300", "--seed", "7"];
    let a = rrsp(&args, dir.path());
    let b = rrsp(&args, dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = rrsp(&["fig3", "--n", "4", "--distances", "0,100", "--trajectories", "300", "--seed", "8"], dir.path());
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn invalid_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "command = \"fig2\"\n[parameters]\nwindow = 3\n").unwrap();
    let out = rrsp(&["--config", "bad.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "invalid-config");
    assert!(String::from_utf8_lossy(&out.stderr).contains("window"));

    let out = rrsp(&["fidelity", "--eta-0", "1.5"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "invalid-parameter");

    let out = rrsp(&["fig2", "--regime", "c"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let out = rrsp(&["--bogus-flag"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    assert!(rrsp(&["--help"], dir.path()).status.success());
}

#[test]
fn infeasible_window_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = rrsp(&["window", "--n", "8", "--k", "2", "--w0", "3", "--out", "never.csv"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_kind(&out), "infeasible-window");
    assert!(!dir.path().join("never.csv").exists());
}

#[test]
fn statevec_check_reports_exact_preparation() {
    let dir = tempfile::tempdir().unwrap();
    let out = rrsp(&["statevec-check", "--n", "4", "--trials", "20", "--out", "sv.csv"], dir.path());
    assert!(out.status.success());
    let summary = String::from_utf8(out.stdout).unwrap();
    let worst: f64 = summary.trim().strip_prefix("max_infidelity=").unwrap().parse().unwrap();
    assert!(worst < 1e-9);
    let text = std::fs::read_to_string(dir.path().join("sv.csv")).unwrap();
    assert_eq!(text.lines().count(), 21);
}

#[test]
fn fig2_regime_a_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = rrsp(&["fig2", "--regime", "a"], dir.path());
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["regime", "sweep_parameter", "protocol", "merit", "success_probability", "fidelity"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3 * 99);
    for triple in rows.chunks(3) {
        let merit = |r: &csv::StringRecord| r[3].parse::<f64>().unwrap();
        assert_eq!(&triple[0][2], "R");
        assert!((merit(&triple[0]) / merit(&triple[1]) - 0.5).abs() < 1e-12);
    }
}

#[test]
fn json_output_tags_divergent_merits() {
    let dir = tempfile::tempdir().unwrap();
    let out = rrsp(&["tradeoff", "--eta-s", "1", "--format", "json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let sc = v.as_array().unwrap().iter().find(|r| r["protocol"] == "SC").unwrap();
    assert_eq!(sc["merit"]["kind"], "divergent");

    let out = rrsp(&["tradeoff", "--eta-s", "1"], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("SC,inf,")));
}

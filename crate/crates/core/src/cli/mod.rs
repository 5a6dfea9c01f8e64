//! Command-line front end.
//!
//! ```text
//! rrsp [COMMAND] [--config FILE] [--seed N] [--out PATH] [--format csv|json] [overrides]
//! ```
//!
//! The command comes from the positional argument or from the config file.
//! Flags override config values. Exit codes: 0 success, 1 I/O failure,
//! 2 invalid configuration, 3 infeasible window.

mod commands;
pub mod config;
pub mod output;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use serde_json::json;

pub use commands::{execute, CommandOutput};
pub use config::{Command, ExperimentConfig, Format};
use output::{write_atomic, RunManifest};

#[derive(Debug, Parser)]
#[command(name = "rrsp", version, about = "Reflection-based remote state preparation toolkit")]
pub struct Args {
    /// Command to run; read from the config file when omitted.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// TOML experiment config.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Total number of qubits.
    #[arg(long)]
    pub n: Option<usize>,
    /// Batch size (`window`) or comma-separated batch sizes (`fig3`).
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<usize>,
    /// Number of batches (`window`).
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub w0: Option<u64>,
    /// Comma-separated fiber lengths in km.
    #[arg(long, value_delimiter = ',')]
    pub distances: Vec<f64>,
    /// Cooperativity.
    #[arg(long, short = 'C')]
    pub cooperativity: Option<f64>,
    /// Transmission (intrinsic transmission for `window` and `fig3`).
    #[arg(long)]
    pub eta_t: Option<f64>,
    #[arg(long)]
    pub eta_0: Option<f64>,
    #[arg(long)]
    pub eta_1: Option<f64>,
    #[arg(long)]
    pub eta_d: Option<f64>,
    #[arg(long)]
    pub eta_s: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Comma-separated mean photon numbers (`fidelity`).
    #[arg(long, value_delimiter = ',')]
    pub mean_photon_number: Vec<f64>,
    /// `a` (routing-limited) or `b` (interface-limited).
    #[arg(long)]
    pub regime: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub trajectories: Option<usize>,
    /// `reflection` or `double-click` (`window`).
    #[arg(long)]
    pub attempt: Option<String>,
    #[arg(long)]
    pub include_dc: Option<bool>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Domain(#[from] crate::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<toml::de::Error> for CliError {
    fn from(e: toml::de::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(crate::Error::InfeasibleWindow { .. }) => 3,
            CliError::Domain(_) => 2,
            CliError::Io(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "invalid-config",
            CliError::Domain(crate::Error::InfeasibleWindow { .. }) => "infeasible-window",
            CliError::Domain(_) => "invalid-parameter",
            CliError::Io(_) => "io",
        }
    }

    /// One-line JSON error record.
    pub fn record(&self) -> String {
        json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "exit_code": self.exit_code(),
            }
        })
        .to_string()
    }
}

fn uses_hardware_table(command: Command) -> bool {
    matches!(command, Command::Window | Command::Fig3)
}

/// Writes flag values into the config's parameter table. Flags that do not
/// belong to the command surface later as unknown-field errors.
pub fn apply_overrides(cfg: &mut ExperimentConfig, args: &Args) -> Result<(), CliError> {
    use toml::Value;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.output_path = Some(out.clone());
    }
    if let Some(format) = args.format {
        cfg.format = format;
    }
    let hw = uses_hardware_table(cfg.command);
    let mut set = |key: &str, value: Value, hardware: bool| -> Result<(), CliError> {
        let table = if hardware && hw {
            let entry = cfg
                .parameters
                .entry("hardware")
                .or_insert_with(|| Value::Table(toml::Table::new()));
            entry
                .as_table_mut()
                .ok_or_else(|| CliError::Config("parameters.hardware must be a table".into()))?
        } else {
            &mut cfg.parameters
        };
        table.insert(key.to_string(), value);
        Ok(())
    };
    let int = |v: u64| -> Result<Value, CliError> {
        i64::try_from(v)
            .map(Value::Integer)
            .map_err(|_| CliError::Config(format!("integer {v} out of range")))
    };
    let floats = |v: &[f64]| Value::Array(v.iter().map(|&x| Value::Float(x)).collect());

    if let Some(n) = args.n {
        set("n", int(n as u64)?, false)?;
    }
    if !args.k.is_empty() {
        if cfg.command == Command::Fig3 {
            let ks = args.k.iter().map(|&k| int(k as u64)).collect::<Result<_, _>>()?;
            set("partitions", Value::Array(ks), false)?;
        } else if let [k] = args.k[..] {
            set("k", int(k as u64)?, false)?;
        } else {
            return Err(CliError::Config("--k takes a single value for this command".into()));
        }
    }
    if let Some(q) = args.q {
        set("q", int(q as u64)?, false)?;
    }
    if let Some(w0) = args.w0 {
        set("w0", int(w0)?, false)?;
    }
    if !args.distances.is_empty() {
        set("distances_km", floats(&args.distances), false)?;
    }
    if let Some(c) = args.cooperativity {
        set("cooperativity", Value::Float(c), true)?;
    }
    if let Some(v) = args.eta_t {
        let key = if hw { "eta_t_intrinsic" } else { "eta_t" };
        set(key, Value::Float(v), true)?;
    }
    for (key, value) in [("eta_0", args.eta_0), ("eta_1", args.eta_1), ("eta_d", args.eta_d)] {
        if let Some(v) = value {
            set(key, Value::Float(v), true)?;
        }
    }
    if let Some(v) = args.eta_s {
        set("eta_s", Value::Float(v), false)?;
    }
    if let Some(v) = args.epsilon {
        set("epsilon", Value::Float(v), false)?;
    }
    if !args.mean_photon_number.is_empty() {
        set("mean_photon_numbers", floats(&args.mean_photon_number), false)?;
    }
    if let Some(r) = &args.regime {
        set("regime", Value::String(r.clone()), false)?;
    }
    if let Some(t) = args.trials {
        set("trials", int(t as u64)?, false)?;
    }
    if let Some(t) = args.trajectories {
        set("trajectories", int(t as u64)?, true)?;
    }
    if let Some(a) = &args.attempt {
        set("attempt", Value::String(a.clone()), false)?;
    }
    if let Some(b) = args.include_dc {
        set("include_dc", Value::Boolean(b), false)?;
    }
    Ok(())
}

/// Effective configuration from the config file, the positional command and
/// the flags.
pub fn resolve_config(args: &Args) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            let cfg = ExperimentConfig::from_toml(&text)?;
            if let Some(cmd) = args.command {
                if cmd != cfg.command {
                    return Err(CliError::Config(format!(
                        "command {} conflicts with config command {}",
                        cmd.name(),
                        cfg.command.name()
                    )));
                }
            }
            cfg
        }
        None => ExperimentConfig::new(
            args.command
                .ok_or_else(|| CliError::Config("no command given and no --config".into()))?,
        ),
    };
    apply_overrides(&mut cfg, args)?;
    Ok(cfg)
}

/// Runs a resolved config and writes its outputs.
pub fn run(cfg: &ExperimentConfig) -> Result<usize, CliError> {
    let start = Instant::now();
    let CommandOutput { table, summary } = execute(cfg)?;
    let bytes = table.encode(cfg.format)?;
    match &cfg.output_path {
        Some(path) => {
            write_atomic(path, &bytes)?;
            let manifest = RunManifest {
                version: env!("CARGO_PKG_VERSION"),
                command: cfg.command.name(),
                seed: cfg.seed,
                wall_clock_s: start.elapsed().as_secs_f64(),
                rows: table.rows.len(),
                output: path.display().to_string(),
                config: cfg.to_toml(),
            };
            let mut text = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
            text.push(b'\n');
            write_atomic(&RunManifest::path_for(path), &text)?;
            if let Some(s) = summary {
                println!("{s}");
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes)?;
            stdout.flush()?;
        }
    }
    Ok(table.rows.len())
}

/// Process entry point; returns the exit code.
pub fn main() -> i32 {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let err = CliError::Config(e.to_string().trim().to_string());
            eprintln!("{}", err.record());
            return err.exit_code();
        }
    };
    match resolve_config(&args).and_then(|cfg| run(&cfg)) {
        Ok(_) => 0,
        Err(err) => {
            eprintln!("{}", err.record());
            err.exit_code()
        }
    }
}

//! Experiment configuration files.
//!
//! A config is a TOML document:
//!
//! ```toml
//! command = "fig3"          # tradeoff | fidelity | statevec-check | window | fig2 | fig3
//! seed = 7                  # optional, default 0
//! output_path = "fig3.csv"  # optional, stdout when absent
//! format = "csv"            # csv | json, default csv
//!
//! [parameters]              # command-specific, see the *Params structs
//! n = 8
//! w0 = 2000
//! distances_km = [0.0, 50.0, 100.0]
//!
//! [parameters.hardware]     # window and fig3 only
//! cooperativity = 38.0
//! ```
//!
//! Unknown keys are rejected.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::efficiency::default_attenuation_length_km;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Tradeoff,
    Fidelity,
    StatevecCheck,
    Window,
    Fig2,
    Fig3,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Tradeoff => "tradeoff",
            Command::Fidelity => "fidelity",
            Command::StatevecCheck => "statevec-check",
            Command::Window => "window",
            Command::Fig2 => "fig2",
            Command::Fig3 => "fig3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub parameters: toml::Table,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            seed: 0,
            output_path: None,
            format: Format::Csv,
            parameters: toml::Table::new(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    /// Command parameters with defaults filled in.
    pub fn params<T: for<'de> Deserialize<'de>>(&self) -> Result<T, toml::de::Error> {
        self.parameters.clone().try_into()
    }
}

fn default_one() -> f64 {
    1.0
}

fn default_eta() -> f64 {
    0.9
}

fn default_cooperativity() -> f64 {
    38.0
}

fn default_n() -> usize {
    8
}

fn default_w0() -> u64 {
    2000
}

fn default_time_bin() -> f64 {
    30e-9
}

fn default_trajectories() -> usize {
    crate::windowing::DEFAULT_TRAJECTORIES
}

fn default_reference_p() -> f64 {
    crate::tradeoff::REFERENCE_SUCCESS_PROBABILITY
}

fn default_distances() -> Vec<f64> {
    (0..=30).map(|i| i as f64 * 10.0).collect()
}

/// Single-qubit merit and leading-order success probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TradeoffParams {
    #[serde(default = "default_one")]
    pub eta_t: f64,
    #[serde(default = "default_eta")]
    pub eta_0: f64,
    /// Defaults to `eta_0` times the cavity reflection efficiency.
    pub eta_1: Option<f64>,
    #[serde(default = "default_eta")]
    pub eta_d: f64,
    #[serde(default = "default_cooperativity")]
    pub cooperativity: f64,
    /// Defaults to `eta_0` times the cavity emission efficiency.
    pub eta_s: Option<f64>,
    #[serde(default = "default_one")]
    pub one_photon: f64,
    #[serde(default = "default_reference_p")]
    pub reference_p: f64,
}

/// Weak-coherent-pulse fidelity over a sweep of mean photon numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FidelityParams {
    #[serde(default = "default_fidelity_n")]
    pub n: usize,
    #[serde(default = "default_one")]
    pub eta_t: f64,
    #[serde(default = "default_eta")]
    pub eta_0: f64,
    pub eta_1: Option<f64>,
    #[serde(default = "default_eta")]
    pub eta_d: f64,
    #[serde(default = "default_cooperativity")]
    pub cooperativity: f64,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default = "default_mean_photon_numbers")]
    pub mean_photon_numbers: Vec<f64>,
}

fn default_fidelity_n() -> usize {
    1
}

fn default_mean_photon_numbers() -> Vec<f64> {
    (0..=16).map(|i| 10f64.powf(-4.0 + i as f64 * 0.2)).collect()
}

/// Randomized check of the reflection protocol against the target state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatevecParams {
    #[serde(default = "default_statevec_n")]
    pub n: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_one")]
    pub eta_t: f64,
    #[serde(default = "default_one")]
    pub eta_0: f64,
    #[serde(default = "default_one")]
    pub eta_1: f64,
    #[serde(default = "default_one")]
    pub eta_d: f64,
}

fn default_statevec_n() -> usize {
    4
}

fn default_trials() -> usize {
    20
}

/// Hardware shared by the windowed-rate commands, under
/// `[parameters.hardware]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowHardware {
    #[serde(default = "default_eta")]
    pub eta_t_intrinsic: f64,
    #[serde(default = "default_eta")]
    pub eta_0: f64,
    /// Defaults to `eta_0` times the cavity reflection efficiency.
    pub eta_1: Option<f64>,
    #[serde(default = "default_eta")]
    pub eta_d: f64,
    #[serde(default = "default_cooperativity")]
    pub cooperativity: f64,
    #[serde(default = "default_time_bin")]
    pub time_bin_s: f64,
    #[serde(default = "default_attenuation_length_km")]
    pub attenuation_length_km: f64,
    #[serde(default = "default_trajectories")]
    pub trajectories: usize,
}

impl Default for WindowHardware {
    fn default() -> Self {
        toml::Table::new().try_into().expect("all hardware fields have defaults")
    }
}

/// Rate of one batch partition over a list of distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowParams {
    #[serde(default = "default_n")]
    pub n: usize,
    /// Batch size; derived from `q` when only `q` is given.
    pub k: Option<usize>,
    pub q: Option<usize>,
    #[serde(default = "default_w0")]
    pub w0: u64,
    #[serde(default = "default_window_distances")]
    pub distances_km: Vec<f64>,
    #[serde(default)]
    pub attempt: AttemptChoice,
    #[serde(default)]
    pub hardware: WindowHardware,
}

fn default_window_distances() -> Vec<f64> {
    vec![0.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttemptChoice {
    #[default]
    Reflection,
    DoubleClick,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig2Params {
    #[serde(default = "default_regime")]
    pub regime: String,
    /// Sweep values (`η` or `C`); regime default when absent.
    pub grid: Option<Vec<f64>>,
    #[serde(default = "default_reference_p")]
    pub reference_p: f64,
}

fn default_regime() -> String {
    "a".to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig3Params {
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_w0")]
    pub w0: u64,
    #[serde(default = "default_distances")]
    pub distances_km: Vec<f64>,
    /// Batch sizes; every divisor of `n` when absent.
    pub partitions: Option<Vec<usize>>,
    #[serde(default = "default_true")]
    pub include_dc: bool,
    #[serde(default)]
    pub hardware: WindowHardware,
}

fn default_true() -> bool {
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_and_full_documents() {
        let c = ExperimentConfig::from_toml("command = \"fig2\"").unwrap();
        assert_eq!(c.command, Command::Fig2);
        assert_eq!(c.seed, 0);
        assert_eq!(c.format, Format::Csv);
        let p: Fig2Params = c.params().unwrap();
        assert_eq!(p.regime, "a");

        let text = r#"
            command = "fig3"
            seed = 11
            output_path = "out/fig3.csv"
            format = "json"
            [parameters]
            n = 2
            distances_km = [0.0, 100.0]
            [parameters.hardware]
            cooperativity = 20.0
        "#;
        let c = ExperimentConfig::from_toml(text).unwrap();
        let p: Fig3Params = c.params().unwrap();
        assert_eq!(p.n, 2);
        assert_eq!(p.distances_km, vec![0.0, 100.0]);
        assert_eq!(p.hardware.cooperativity, 20.0);
        assert_eq!(p.hardware.trajectories, 1000);
    }

    #[test]
    fn round_trip() {
        let text = r#"
            command = "window"
            seed = 3
            format = "json"
            [parameters]
            n = 8
            k = 2
            distances_km = [10.0, 20.5]
            attempt = "double-click"
        "#;
        let c = ExperimentConfig::from_toml(text).unwrap();
        let again = ExperimentConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(c, again);
        let p: WindowParams = again.params().unwrap();
        assert_eq!(p.attempt, AttemptChoice::DoubleClick);
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(ExperimentConfig::from_toml("command = \"fig2\"\nbogus = 1").is_err());
        assert!(ExperimentConfig::from_toml("command = \"plot\"").is_err());
        let c = ExperimentConfig::from_toml("command = \"fig2\"\n[parameters]\nn = 3").unwrap();
        let err = c.params::<Fig2Params>().unwrap_err().to_string();
        assert!(err.contains("unknown field"), "{err}");
        let c = ExperimentConfig::from_toml("command = \"fig3\"\n[parameters]\nwindow = 3").unwrap();
        assert!(c.params::<Fig3Params>().is_err());
    }
}

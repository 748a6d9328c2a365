//! Run configuration: one flat TOML table of `key = value` lines.
//!
//! Unknown keys are rejected. Every key is optional; omitted keys take the
//! defaults of [`RunConfig::default`]. Command-line flags override file values.

use std::path::PathBuf;

use clap::ValueEnum;
use coint_core::{DeterministicSpec, Level, Normalization, Transform};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    IngestCheck,
    Adf,
    Eg,
    Grid,
    Ecm,
    McFalsepos,
    McSize,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::IngestCheck => "ingest-check",
            Command::Adf => "adf",
            Command::Eg => "eg",
            Command::Grid => "grid",
            Command::Ecm => "ecm",
            Command::McFalsepos => "mc-falsepos",
            Command::McSize => "mc-size",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TransformArg {
    Log,
    #[default]
    None,
}

impl From<TransformArg> for Transform {
    fn from(t: TransformArg) -> Self {
        match t {
            TransformArg::Log => Transform::Logarithms,
            TransformArg::None => Transform::Untransformed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SideArg {
    #[default]
    First,
    Second,
}

impl From<SideArg> for Normalization {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::First => Normalization::First,
            SideArg::Second => Normalization::Second,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DetArg {
    N,
    #[default]
    C,
    Ct,
}

impl From<DetArg> for DeterministicSpec {
    fn from(d: DetArg) -> Self {
        match d {
            DetArg::N => DeterministicSpec::NONE,
            DetArg::C => DeterministicSpec::CONSTANT,
            DetArg::Ct => DeterministicSpec::CONSTANT_TREND,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum McTest {
    /// Engle-Granger on the generated levels.
    #[default]
    Eg,
    /// Engle-Granger on first differences.
    EgDifferenced,
    Adf,
    Spurious,
    /// Residual unit-root test on the levels-regression ECT.
    EctUnitRoot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DgpArg {
    #[default]
    RandomWalks,
    Cointegrated,
    WhiteNoise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub first: Option<PathBuf>,
    pub second: Option<PathBuf>,
    /// Extra ECM regressors, one CSV per control.
    pub controls: Vec<PathBuf>,
    pub transform: TransformArg,
    /// Dependent series for `eg`/`ecm`; tested series for `adf` and `mc-size --test adf`.
    pub normalize_on: SideArg,
    pub lags: usize,
    pub trend: bool,
    pub det: DetArg,
    /// Defaults to the periods per year of the input.
    pub seasonal_gap: Option<usize>,
    pub ect_lag: usize,
    pub control_lags: usize,
    pub test: McTest,
    pub dgp: DgpArg,
    pub beta: f64,
    pub adjust: f64,
    pub sd: f64,
    pub n: usize,
    pub reps: usize,
    /// Significance level in percent: 1, 5 or 10.
    pub level: u32,
    pub seed: u64,
    pub in_levels: bool,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: None,
            first: None,
            second: None,
            controls: Vec::new(),
            transform: TransformArg::None,
            normalize_on: SideArg::First,
            lags: 0,
            trend: false,
            det: DetArg::C,
            seasonal_gap: None,
            ect_lag: 1,
            control_lags: 1,
            test: McTest::Eg,
            dgp: DgpArg::RandomWalks,
            beta: 1.0,
            adjust: 0.3,
            sd: 1.0,
            n: 300,
            reps: 1000,
            level: 1,
            seed: 42,
            in_levels: false,
            out: None,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.message().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }

    pub fn level(&self) -> Result<Level, String> {
        Level::from_percent(self.level).ok_or_else(|| format!("level must be 1, 5 or 10, got {}", self.level))
    }
}

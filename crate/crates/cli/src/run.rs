//! Argument parsing, command dispatch and report files.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use coint_core::montecarlo::Component;
use coint_core::{
    adf_test, engle_granger_test, run_false_positive_experiment, run_size_experiment, run_spec_grid, DgpKind, DgpSpec,
    EcmSpec, EgSpec, FalsePositiveConfig, Level, SizeConfig, TestConfig, TimeSeries,
};
use serde_json::{json, Value};
use thiserror::Error;

use crate::config::{Command, DgpArg, DetArg, Format, McTest, RunConfig, SideArg, TransformArg};
use crate::ingest::{ingest_csv, IngestError};
use crate::report::*;

/// Environment variable naming the directory report files are written to.
pub const OUTPUT_DIR_VAR: &str = "COINT_OUTPUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Core(#[from] coint_core::Error),
    #[error("{0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::Core(e) if e.is_config() => 1,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Ingest(_) | CliError::Core(_) | CliError::Output(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            1 => "usage",
            3 => "numerical",
            _ => "data",
        }
    }

    /// Single-line JSON record for stderr.
    pub fn record(&self) -> String {
        json!({"error": self.kind(), "exit_code": self.exit_code(), "message": self.to_string()}).to_string()
    }
}

#[derive(Debug, Parser)]
#[command(name = "coint", version, about = "Cointegration tests, error-correction models and Monte Carlo size checks")]
pub struct Args {
    /// Command to run; may instead come from the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// Flat `key = value` config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub first: Option<PathBuf>,
    #[arg(long)]
    pub second: Option<PathBuf>,
    /// Extra ECM regressor CSV; repeatable.
    #[arg(long = "control")]
    pub controls: Vec<PathBuf>,
    #[arg(long, value_enum)]
    pub transform: Option<TransformArg>,
    /// Shorthand for `--transform log`.
    #[arg(long, conflicts_with = "transform")]
    pub log: bool,
    #[arg(long, value_enum)]
    pub normalize_on: Option<SideArg>,
    #[arg(long)]
    pub lags: Option<usize>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub trend: Option<bool>,
    #[arg(long, value_enum)]
    pub det: Option<DetArg>,
    #[arg(long)]
    pub seasonal_gap: Option<usize>,
    #[arg(long)]
    pub ect_lag: Option<usize>,
    #[arg(long)]
    pub control_lags: Option<usize>,
    #[arg(long, value_enum)]
    pub test: Option<McTest>,
    #[arg(long, value_enum)]
    pub dgp: Option<DgpArg>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub adjust: Option<f64>,
    #[arg(long)]
    pub sd: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub reps: Option<usize>,
    /// Significance level in percent: 1, 5 or 10.
    #[arg(long)]
    pub level: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub in_levels: Option<bool>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl Args {
    /// Applies every flag that was given on top of `base`.
    pub fn merge_into(self, mut c: RunConfig) -> RunConfig {
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { c.$field = v; })*
            };
        }
        set!(transform, normalize_on, lags, trend, det, ect_lag, control_lags, test, dgp, beta, adjust, sd, n, reps, level, seed, in_levels, format);
        if self.command.is_some() {
            c.command = self.command;
        }
        if self.first.is_some() {
            c.first = self.first;
        }
        if self.second.is_some() {
            c.second = self.second;
        }
        if self.seasonal_gap.is_some() {
            c.seasonal_gap = self.seasonal_gap;
        }
        if self.out.is_some() {
            c.out = self.out;
        }
        if !self.controls.is_empty() {
            c.controls = self.controls;
        }
        if self.log {
            c.transform = TransformArg::Log;
        }
        c
    }
}

/// Loads the config file named by `--config` (if any) and applies the flags.
pub fn resolve_config(args: Args) -> Result<RunConfig, CliError> {
    let base = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
            RunConfig::from_toml(&text).map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    Ok(args.merge_into(base))
}

/// A finished command, rendered.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub command: Command,
    pub json: Value,
    pub csv: String,
    pub human: String,
}

impl Output {
    fn new(command: Command, report: Value, extra: Vec<(&str, Value)>, csv: String, human: String) -> Self {
        let mut json = json!({"command": command.as_str(), "report": report});
        for (k, v) in extra {
            json[k] = v;
        }
        round_json(&mut json);
        Output {
            command,
            json,
            csv,
            human,
        }
    }

    pub fn json_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("json renders");
        s.push('\n');
        s
    }
}

fn value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn input(path: &Option<PathBuf>, key: &str) -> Result<TimeSeries, CliError> {
    let path = path
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("`{key}` input is required for this command")))?;
    Ok(ingest_csv(path)?)
}

fn pair(c: &RunConfig) -> Result<(TimeSeries, TimeSeries), CliError> {
    Ok((input(&c.first, "first")?, input(&c.second, "second")?))
}

fn eg_spec(c: &RunConfig) -> EgSpec {
    EgSpec {
        transform: c.transform.into(),
        normalize_on: c.normalize_on.into(),
        lags: c.lags,
        trend_in_stage_one: c.trend,
    }
}

fn dgp(c: &RunConfig) -> Result<DgpSpec, CliError> {
    let kind = match c.dgp {
        DgpArg::RandomWalks => DgpKind::IndependentRandomWalks,
        DgpArg::Cointegrated => DgpKind::CointegratedPair {
            beta: c.beta,
            adjust: c.adjust,
        },
        DgpArg::WhiteNoise => DgpKind::WhiteNoisePair,
    };
    Ok(DgpSpec::new(kind, c.n, c.sd, c.seed)?)
}

/// Runs the configured command without touching the filesystem beyond its inputs.
pub fn execute(c: &RunConfig) -> Result<Output, CliError> {
    let command = c
        .command
        .ok_or_else(|| CliError::Usage("no command given on the command line or in the config".into()))?;
    let level = c.level().map_err(CliError::Config)?;
    match command {
        Command::IngestCheck => {
            let mut series = vec![input(&c.first, "first")?];
            if c.second.is_some() {
                series.push(input(&c.second, "second")?);
            }
            let summary: Vec<Value> = series
                .iter()
                .map(|s| {
                    json!({
                        "name": s.name(),
                        "frequency": s.frequency(),
                        "start": s.start().to_string(),
                        "end": s.end().to_string(),
                        "len": s.len(),
                    })
                })
                .collect();
            let rows: Vec<Vec<String>> = series
                .iter()
                .map(|s| {
                    vec![
                        s.name().to_string(),
                        format!("{:?}", s.frequency()).to_lowercase(),
                        s.start().to_string(),
                        s.end().to_string(),
                        s.len().to_string(),
                    ]
                })
                .collect();
            let human = series
                .iter()
                .map(|s| format!("{}: {} .. {} ({} observations)\n", s.name(), s.start(), s.end(), s.len()))
                .collect();
            Ok(Output::new(
                command,
                Value::Array(summary),
                vec![],
                to_csv(&["name", "frequency", "start", "end", "len"], &rows),
                human,
            ))
        }
        Command::Adf => {
            let s = match c.normalize_on {
                SideArg::First => input(&c.first, "first")?,
                SideArg::Second => input(&c.second, "second")?,
            };
            let s = match c.transform {
                TransformArg::Log => s.log_transform()?,
                TransformArg::None => s,
            };
            let r = adf_test(&s, c.lags, c.det.into())?;
            Ok(Output::new(command, value(&r), vec![], to_csv(&ADF_COLUMNS, &[adf_row(&r)]), human_adf(&r)))
        }
        Command::Eg => {
            let (a, b) = pair(c)?;
            let r = engle_granger_test(&a, &b, &eg_spec(c))?;
            Ok(Output::new(command, value(&r), vec![], to_csv(&GRID_COLUMNS, &[eg_row(&r)]), human_eg(&r)))
        }
        Command::Grid => {
            let (a, b) = pair(c)?;
            let g = run_spec_grid(&a, &b, &EgSpec::default_grid())?;
            Ok(Output::new(command, value(&g), vec![], to_csv(&GRID_COLUMNS, &grid_rows(&g)), human_grid(&g)))
        }
        Command::Ecm => run_ecm(c, level),
        Command::McFalsepos => {
            let config = FalsePositiveConfig {
                n: c.n,
                reps: c.reps,
                level,
                base_seed: c.seed,
                in_levels: c.in_levels,
            };
            let r = run_false_positive_experiment(&config)?;
            let title = if c.in_levels {
                "Engle-Granger on levels of independent random walks"
            } else {
                "Engle-Granger on differences of independent random walks"
            };
            Ok(Output::new(command, value(&r), vec![], to_csv(&RATE_COLUMNS, &rate_rows(&r)), human_rates(title, &r)))
        }
        Command::McSize => {
            let test = match c.test {
                McTest::Eg | McTest::EgDifferenced => TestConfig::EngleGranger {
                    spec: eg_spec(c),
                    differenced: c.test == McTest::EgDifferenced,
                },
                McTest::Adf => TestConfig::Adf {
                    component: match c.normalize_on {
                        SideArg::First => Component::First,
                        SideArg::Second => Component::Second,
                    },
                    lags: c.lags,
                    det: c.det.into(),
                },
                McTest::Spurious => TestConfig::SpuriousRegression { include_trend: c.trend },
                McTest::EctUnitRoot => TestConfig::EctUnitRoot {
                    lags: c.lags,
                    include_trend: c.trend,
                },
            };
            let config = SizeConfig {
                test,
                dgp: dgp(c)?,
                reps: c.reps,
                levels: Level::ALL.to_vec(),
                base_seed: c.seed,
            };
            let r = run_size_experiment(&config)?;
            Ok(Output::new(command, value(&r), vec![], to_csv(&RATE_COLUMNS, &rate_rows(&r)), human_rates("Rejection rates", &r)))
        }
    }
}

fn run_ecm(c: &RunConfig, level: Level) -> Result<Output, CliError> {
    let (a, b) = pair(c)?;
    let (dep, reg) = match c.normalize_on {
        SideArg::First => (&a, &b),
        SideArg::Second => (&b, &a),
    };
    let controls = c.controls.iter().map(|p| ingest_csv(p)).collect::<Result<Vec<_>, _>>()?;
    let spec = EcmSpec {
        seasonal_gap: c.seasonal_gap.unwrap_or(dep.frequency().periods_per_year() as usize),
        ect_lag: c.ect_lag,
        ardl_control_lags: c.control_lags,
        include_trend: c.trend,
    };
    let (y, x) = match c.transform {
        TransformArg::Log => (dep.log_transform()?, reg.log_transform()?),
        TransformArg::None => (dep.clone(), reg.clone()),
    };
    let fit = coint_core::ecm::estimate_ecm_with_controls(&y, &x, &spec, &controls)?;

    let mut caveats = Vec::new();
    let pretest = engle_granger_test(&a, &b, &eg_spec(c));
    match &pretest {
        Ok(r) if !r.reject_at[&level] => caveats.push(format!(
            "Engle-Granger does not reject no-cointegration at {level} (statistic {:.3}); the error-correction term may be I(1) and its coefficient is not interpretable",
            r.statistic
        )),
        Ok(_) => {}
        Err(e) => caveats.push(format!("Engle-Granger pre-test failed: {e}")),
    }

    let mut rows = term_rows("levels", &fit.levels_fit);
    rows.extend(term_rows("short_run", &fit.ardl_fit));
    let mut human = format!(
        "ECM: {} on {} (gap {}, ECT lag {}, {} control lags), n {}\n  ECT coefficient {:.3} (t {:.3})\n  regressors: {}\n",
        y.name(),
        x.name(),
        spec.seasonal_gap,
        spec.ect_lag,
        spec.ardl_control_lags,
        fit.n_effective,
        fit.ect_coefficient,
        fit.ect_t_stat,
        fit.control_manifest.join(", "),
    );
    if let Ok(r) = &pretest {
        human.push_str(&human_eg(r));
    }
    for caveat in &caveats {
        human.push_str(&format!("caveat: {caveat}\n"));
    }
    let pretest = match pretest {
        Ok(r) => value(&r),
        Err(e) => json!({"error": e.to_string()}),
    };
    Ok(Output::new(
        Command::Ecm,
        value(&fit),
        vec![("cointegration", pretest), ("caveats", value(&caveats))],
        to_csv(&TERM_COLUMNS, &rows),
        human,
    ))
}

/// Report files for `config`, or `None` to print to stdout.
pub fn output_paths(c: &RunConfig, command: Command, out_dir: Option<&Path>) -> Option<Vec<(PathBuf, Format)>> {
    let base = match (&c.out, out_dir) {
        (Some(out), Some(dir)) if out.is_relative() => dir.join(out),
        (Some(out), _) => out.clone(),
        (None, Some(dir)) => dir.join(command.as_str()),
        (None, None) => return None,
    };
    let given_ext = c.out.is_some();
    Some(match c.format {
        Format::Both => vec![
            (base.with_extension("json"), Format::Json),
            (base.with_extension("csv"), Format::Csv),
        ],
        Format::Json if given_ext => vec![(base, Format::Json)],
        Format::Csv if given_ext => vec![(base, Format::Csv)],
        f @ Format::Json => vec![(base.with_extension("json"), f)],
        f @ Format::Csv => vec![(base.with_extension("csv"), f)],
    })
}

/// Writes the report files, or the machine output to `stdout` when there are none.
pub fn emit(c: &RunConfig, output: &Output, out_dir: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Output(e.to_string());
    match output_paths(c, output.command, out_dir) {
        None => {
            match c.format {
                Format::Json => stdout.write_all(output.json_text().as_bytes()),
                Format::Csv => stdout.write_all(output.csv.as_bytes()),
                Format::Both => stdout
                    .write_all(output.json_text().as_bytes())
                    .and_then(|_| stdout.write_all(b"\n"))
                    .and_then(|_| stdout.write_all(output.csv.as_bytes())),
            }
            .map_err(io)?;
        }
        Some(paths) => {
            for (path, format) in paths {
                if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                    fs::create_dir_all(parent).map_err(io)?;
                }
                let body = match format {
                    Format::Csv => output.csv.clone(),
                    _ => output.json_text(),
                };
                fs::write(&path, body).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
            }
            stdout.write_all(output.human.as_bytes()).map_err(io)?;
        }
    }
    Ok(())
}

/// Full program: parse, run, emit. Returns the process exit code.
pub fn main_with<I, T>(args: I, out_dir: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let err = CliError::Usage(e.render().to_string().lines().next().unwrap_or("").to_string());
            let _ = writeln!(stderr, "{}", err.record());
            return err.exit_code();
        }
    };
    let result = resolve_config(args).and_then(|c| {
        let output = execute(&c)?;
        emit(&c, &output, out_dir, stdout)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.record());
            e.exit_code()
        }
    }
}

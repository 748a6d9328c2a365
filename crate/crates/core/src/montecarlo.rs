//! Seeded data-generating processes and rejection-frequency experiments.
//!
//! Replication `r` draws from a ChaCha20 stream seeded by
//! [`replication_seed`]`(base_seed, r)`, so results do not depend on how
//! replications are scheduled across threads.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cointegration::{engle_granger_test, EgSpec, Normalization, Transform, WarningCode};
use crate::critical::{CriticalValueTable, DeterministicSpec, Level};
use crate::ecm::{estimate_ecm, estimate_levels, EcmSpec};
use crate::error::{Error, Result};
use crate::series::{Period, TimeSeries};
use crate::unit_root::{adf_regression, adf_test, decisions, surface_n};

/// PRNG and normal sampler; part of every config digest.
pub const RNG_ALGORITHM: &str = "chacha20(rand_chacha-0.9)+ziggurat-normal(rand_distr-0.5)";
pub const BURN_IN: usize = 100;
pub const MIN_N: usize = 30;
pub const MIN_REPS: usize = 100;

/// 97.5% standard normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DgpKind {
    IndependentRandomWalks,
    /// `x` a random walk; `y_t = y_{t-1} + adjust (beta x_{t-1} - y_{t-1}) + e_t`.
    CointegratedPair { beta: f64, adjust: f64 },
    WhiteNoisePair,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDgp")]
pub struct DgpSpec {
    kind: DgpKind,
    n: usize,
    innovation_sd: f64,
    seed: u64,
}

#[derive(Deserialize)]
struct RawDgp {
    kind: DgpKind,
    n: usize,
    innovation_sd: f64,
    seed: u64,
}

impl TryFrom<RawDgp> for DgpSpec {
    type Error = Error;

    fn try_from(raw: RawDgp) -> Result<Self> {
        DgpSpec::new(raw.kind, raw.n, raw.innovation_sd, raw.seed)
    }
}

impl DgpSpec {
    pub fn new(kind: DgpKind, n: usize, innovation_sd: f64, seed: u64) -> Result<Self> {
        if n < MIN_N {
            return Err(Error::InvalidSpec(format!("n = {n}; at least {MIN_N} required")));
        }
        if !(innovation_sd.is_finite() && innovation_sd > 0.0) {
            return Err(Error::InvalidSpec("innovation_sd must be positive and finite".into()));
        }
        if let DgpKind::CointegratedPair { beta, adjust } = kind {
            if !(adjust > 0.0 && adjust <= 1.0) || !beta.is_finite() {
                return Err(Error::InvalidSpec(
                    "cointegrated pair needs finite beta and adjust in (0, 1]".into(),
                ));
            }
        }
        Ok(DgpSpec {
            kind,
            n,
            innovation_sd,
            seed,
        })
    }

    pub fn kind(&self) -> DgpKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn innovation_sd(&self) -> f64 {
        self.innovation_sd
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(self, seed: u64) -> Self {
        DgpSpec { seed, ..self }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replication `r` under `base_seed`.
pub fn replication_seed(base_seed: u64, r: u64) -> u64 {
    splitmix64(base_seed ^ splitmix64(r))
}

/// Draws the pair `(x, y)` after a discarded burn-in.
pub fn generate(dgp: &DgpSpec) -> (TimeSeries, TimeSeries) {
    let mut rng = ChaCha20Rng::seed_from_u64(dgp.seed);
    let sd = dgp.innovation_sd;
    let mut draw = || -> f64 {
        let z: f64 = StandardNormal.sample(&mut rng);
        sd * z
    };
    let total = BURN_IN + dgp.n;
    let mut xs = Vec::with_capacity(total);
    let mut ys = Vec::with_capacity(total);
    let (mut x, mut y) = (0.0_f64, 0.0_f64);
    for _ in 0..total {
        let (ex, ey) = (draw(), draw());
        match dgp.kind {
            DgpKind::IndependentRandomWalks => {
                x += ex;
                y += ey;
            }
            DgpKind::CointegratedPair { beta, adjust } => {
                let x_prev = x;
                x += ex;
                y += adjust * (beta * x_prev - y) + ey;
            }
            DgpKind::WhiteNoisePair => {
                x = ex;
                y = ey;
            }
        }
        xs.push(x);
        ys.push(y);
    }
    let start = Period::monthly(2000, 1).expect("valid period");
    let x = TimeSeries::new("x", start, xs.split_off(BURN_IN)).expect("finite draws");
    let y = TimeSeries::new("y", start, ys.split_off(BURN_IN)).expect("finite draws");
    (x, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    First,
    Second,
}

/// The statistic whose rejection frequency an experiment measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "test", rename_all = "snake_case")]
pub enum TestConfig {
    /// Engle-Granger on the generated levels, or on their first differences.
    EngleGranger { spec: EgSpec, differenced: bool },
    /// ADF on one generated series; uses single-series critical values.
    Adf { component: Component, lags: usize, det: DeterministicSpec },
    /// Two-sided t-test on the slope of the levels regression of `y` on `x`.
    SpuriousRegression { include_trend: bool },
    /// Residual unit-root test on the ECT built from the levels regression of
    /// `y` on `x`; a rejection means the ECT looks stationary.
    EctUnitRoot { lags: usize, include_trend: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeConfig {
    pub test: TestConfig,
    pub dgp: DgpSpec,
    pub reps: usize,
    pub levels: Vec<Level>,
    pub base_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: SizeConfig,
    pub replications: usize,
    pub rejections: BTreeMap<Level, usize>,
    pub rejection_rate: BTreeMap<Level, f64>,
    pub wilson_interval_95: BTreeMap<Level, (f64, f64)>,
    /// Replications whose test carried a `DifferencedInput` warning.
    pub guard_hits: usize,
    /// Replications whose test returned an error; counted as non-rejections.
    pub failures: usize,
    pub seed: u64,
    pub rng: String,
    pub critical_value_source: String,
    pub config_digest: String,
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0).min(p), (center + half).min(1.0).max(p))
}

/// SHA-256 over the canonical JSON of the config and the RNG identifier.
pub fn config_digest<T: Serialize>(config: &T) -> String {
    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_vec(config).expect("config serializes"));
    hasher.update(RNG_ALGORITHM.as_bytes());
    hex::encode(hasher.finalize())
}

#[derive(Debug, Clone, Default)]
struct Tally {
    rejections: Vec<usize>,
    guard_hits: usize,
    failures: usize,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        let rejections = match (self.rejections.is_empty(), other.rejections.is_empty()) {
            (true, _) => other.rejections,
            (_, true) => self.rejections,
            _ => self
                .rejections
                .iter()
                .zip(&other.rejections)
                .map(|(a, b)| a + b)
                .collect(),
        };
        Tally {
            rejections,
            guard_hits: self.guard_hits + other.guard_hits,
            failures: self.failures + other.failures,
        }
    }
}

struct Outcome {
    reject: Vec<bool>,
    guard: bool,
}

fn two_sided_normal_critical(level: Level) -> f64 {
    match level {
        Level::One => 2.575_829_303_548_901,
        Level::Five => Z95,
        Level::Ten => 1.644_853_626_951_472_2,
    }
}

fn run_once(test: &TestConfig, dgp: &DgpSpec, levels: &[Level]) -> Result<Outcome> {
    let (x, y) = generate(dgp);
    match *test {
        TestConfig::EngleGranger { spec, differenced } => {
            let (a, b) = if differenced {
                (x.iterated_difference(1)?, y.iterated_difference(1)?)
            } else {
                (x, y)
            };
            let r = engle_granger_test(&a, &b, &spec)?;
            Ok(Outcome {
                reject: levels.iter().map(|l| r.reject_at[l]).collect(),
                guard: r.has_warning(WarningCode::DifferencedInput),
            })
        }
        TestConfig::Adf { component, lags, det } => {
            let s = match component {
                Component::First => &x,
                Component::Second => &y,
            };
            let r = adf_test(s, lags, det)?;
            Ok(Outcome {
                reject: levels.iter().map(|l| r.reject_at[l]).collect(),
                guard: false,
            })
        }
        TestConfig::SpuriousRegression { include_trend } => {
            let fit = estimate_levels(&y, &x, include_trend)?;
            let t = fit.t_stat("x").expect("slope column").abs();
            Ok(Outcome {
                reject: levels.iter().map(|&l| t > two_sided_normal_critical(l)).collect(),
                guard: false,
            })
        }
        TestConfig::EctUnitRoot { lags, include_trend } => {
            let fit = estimate_levels(&y, &x, include_trend)?;
            let reg = adf_regression(&fit.residuals, lags, DeterministicSpec::NONE)?;
            let det = if include_trend {
                DeterministicSpec::CONSTANT_TREND
            } else {
                DeterministicSpec::CONSTANT
            };
            let cv = CriticalValueTable::embedded().values(2, surface_n(reg.n_effective), det)?;
            let reject_at = decisions(reg.statistic, &cv);
            Ok(Outcome {
                reject: levels.iter().map(|l| reject_at[l]).collect(),
                guard: false,
            })
        }
    }
}

fn validate_reps(reps: usize) -> Result<()> {
    if reps < MIN_REPS {
        return Err(Error::InvalidSpec(format!(
            "{reps} replications requested; at least {MIN_REPS} required"
        )));
    }
    Ok(())
}

/// Rejection frequencies of `config.test` under `config.dgp`.
pub fn run_size_experiment(config: &SizeConfig) -> Result<ExperimentResult> {
    validate_reps(config.reps)?;
    if config.levels.is_empty() {
        return Err(Error::InvalidSpec("no significance levels requested".into()));
    }
    if let TestConfig::EngleGranger { spec, .. } = config.test {
        spec.validate()?;
    }
    let mut levels = config.levels.clone();
    levels.sort();
    levels.dedup();

    let tally = (0..config.reps as u64)
        .into_par_iter()
        .map(|r| {
            let dgp = config.dgp.with_seed(replication_seed(config.base_seed, r));
            match run_once(&config.test, &dgp, &levels) {
                Ok(o) => Tally {
                    rejections: o.reject.iter().map(|&b| usize::from(b)).collect(),
                    guard_hits: usize::from(o.guard),
                    failures: 0,
                },
                Err(_) => Tally {
                    rejections: vec![0; levels.len()],
                    guard_hits: 0,
                    failures: 1,
                },
            }
        })
        .reduce(Tally::default, Tally::merge);

    let reps = config.reps;
    let mut rejections = BTreeMap::new();
    let mut rejection_rate = BTreeMap::new();
    let mut wilson = BTreeMap::new();
    for (level, &count) in levels.iter().zip(&tally.rejections) {
        rejections.insert(*level, count);
        rejection_rate.insert(*level, count as f64 / reps as f64);
        wilson.insert(*level, wilson_interval(count, reps, Z95));
    }
    Ok(ExperimentResult {
        config: SizeConfig {
            levels,
            ..config.clone()
        },
        replications: reps,
        rejections,
        rejection_rate,
        wilson_interval_95: wilson,
        guard_hits: tally.guard_hits,
        failures: tally.failures,
        seed: config.base_seed,
        rng: RNG_ALGORITHM.to_string(),
        critical_value_source: CriticalValueTable::embedded().version().to_string(),
        config_digest: config_digest(config),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FalsePositiveConfig {
    pub n: usize,
    pub reps: usize,
    pub level: Level,
    pub base_seed: u64,
    /// Run the correctly specified test on levels instead of differences.
    pub in_levels: bool,
}

impl FalsePositiveConfig {
    pub fn size_config(&self) -> Result<SizeConfig> {
        Ok(SizeConfig {
            test: TestConfig::EngleGranger {
                spec: EgSpec::plain(Transform::Untransformed, Normalization::First),
                differenced: !self.in_levels,
            },
            dgp: DgpSpec::new(DgpKind::IndependentRandomWalks, self.n, 1.0, self.base_seed)?,
            reps: self.reps,
            levels: vec![self.level],
            base_seed: self.base_seed,
        })
    }
}

/// Engle-Granger on first differences of independent random walks. Fails
/// with [`Error::GuardMiss`] if any differenced replication lacks the
/// `DifferencedInput` warning.
pub fn run_false_positive_experiment(config: &FalsePositiveConfig) -> Result<ExperimentResult> {
    let result = run_size_experiment(&config.size_config()?)?;
    if !config.in_levels && result.guard_hits != result.replications {
        return Err(Error::GuardMiss(format!(
            "DifferencedInput fired in {} of {} replications",
            result.guard_hits, result.replications
        )));
    }
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveryConfig {
    pub dgp: DgpSpec,
    pub spec: EcmSpec,
    pub reps: usize,
    pub base_seed: u64,
    /// Open interval the ECT coefficient must fall in.
    pub coefficient_range: (f64, f64),
    /// The ECT t-statistic must be below this.
    pub max_t_stat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryResult {
    pub config: RecoveryConfig,
    pub replications: usize,
    pub hits: usize,
    pub hit_rate: f64,
    pub wilson_interval_95: (f64, f64),
    pub median_coefficient: Option<f64>,
    pub failures: usize,
    pub seed: u64,
    pub rng: String,
    pub config_digest: String,
}

/// How often the ECM recovers an error-correction coefficient in range with a
/// significant t-ratio.
pub fn run_ecm_recovery_experiment(config: &RecoveryConfig) -> Result<RecoveryResult> {
    validate_reps(config.reps)?;
    let (lo, hi) = config.coefficient_range;
    let outcomes: Vec<Option<(f64, f64)>> = (0..config.reps as u64)
        .into_par_iter()
        .map(|r| {
            let dgp = config.dgp.with_seed(replication_seed(config.base_seed, r));
            let (x, y) = generate(&dgp);
            estimate_ecm(&y, &x, &config.spec)
                .ok()
                .map(|fit| (fit.ect_coefficient, fit.ect_t_stat))
        })
        .collect();
    let hits = outcomes
        .iter()
        .flatten()
        .filter(|(c, t)| *c > lo && *c < hi && *t < config.max_t_stat)
        .count();
    let mut coefs: Vec<f64> = outcomes.iter().flatten().map(|(c, _)| *c).collect();
    coefs.sort_by(f64::total_cmp);
    let median_coefficient = (!coefs.is_empty()).then(|| {
        let m = coefs.len();
        if m % 2 == 1 {
            coefs[m / 2]
        } else {
            0.5 * (coefs[m / 2 - 1] + coefs[m / 2])
        }
    });
    Ok(RecoveryResult {
        config: *config,
        replications: config.reps,
        hits,
        hit_rate: hits as f64 / config.reps as f64,
        wilson_interval_95: wilson_interval(hits, config.reps, Z95),
        median_coefficient,
        failures: outcomes.iter().filter(|o| o.is_none()).count(),
        seed: config.base_seed,
        rng: RNG_ALGORITHM.to_string(),
        config_digest: config_digest(config),
    })
}

//! Response-surface critical values for Dickey-Fuller and Engle-Granger tests.
//!
//! The coefficients live in `data/mackinnon2010.txt`, embedded at build time.
//! A critical value is `b0 + b1/n + b2/n^2 + b3/n^3`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TABLE_SOURCE: &str = include_str!("../data/mackinnon2010.txt");

pub const MIN_SAMPLE: usize = 20;
pub const MAX_VARIABLES: usize = 6;

/// Significance level of a left-tailed test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    #[serde(rename = "1%")]
    One,
    #[serde(rename = "5%")]
    Five,
    #[serde(rename = "10%")]
    Ten,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::One, Level::Five, Level::Ten];

    pub fn percent(self) -> u32 {
        match self {
            Level::One => 1,
            Level::Five => 5,
            Level::Ten => 10,
        }
    }

    pub fn from_percent(p: u32) -> Option<Self> {
        match p {
            1 => Some(Level::One),
            5 => Some(Level::Five),
            10 => Some(Level::Ten),
            _ => None,
        }
    }

    pub fn alpha(self) -> f64 {
        f64::from(self.percent()) / 100.0
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}%", self.percent())
    }
}

/// Deterministic terms in the test regression: constant, or constant and linear trend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDeterministic")]
pub struct DeterministicSpec {
    constant: bool,
    trend: bool,
}

#[derive(Deserialize)]
struct RawDeterministic {
    constant: bool,
    trend: bool,
}

impl TryFrom<RawDeterministic> for DeterministicSpec {
    type Error = Error;

    fn try_from(raw: RawDeterministic) -> Result<Self> {
        DeterministicSpec::new(raw.constant, raw.trend)
    }
}

impl DeterministicSpec {
    pub const NONE: DeterministicSpec = DeterministicSpec {
        constant: false,
        trend: false,
    };
    pub const CONSTANT: DeterministicSpec = DeterministicSpec {
        constant: true,
        trend: false,
    };
    pub const CONSTANT_TREND: DeterministicSpec = DeterministicSpec {
        constant: true,
        trend: true,
    };

    pub fn new(constant: bool, trend: bool) -> Result<Self> {
        if trend && !constant {
            return Err(Error::InvalidSpec(
                "a trend requires a constant in the test regression".into(),
            ));
        }
        Ok(DeterministicSpec { constant, trend })
    }

    pub fn constant(self) -> bool {
        self.constant
    }

    pub fn trend(self) -> bool {
        self.trend
    }

    /// Short code: `n`, `c` or `ct`.
    pub fn code(self) -> &'static str {
        match (self.constant, self.trend) {
            (false, _) => "n",
            (true, false) => "c",
            (true, true) => "ct",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        match code {
            "n" | "none" => Some(Self::NONE),
            "c" | "constant" => Some(Self::CONSTANT),
            "ct" | "trend" => Some(Self::CONSTANT_TREND),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalValueTable {
    version: String,
    entries: BTreeMap<(&'static str, usize, Level), [f64; 4]>,
}

fn det_key(code: &str) -> Option<&'static str> {
    match code {
        "none" | "n" => Some("n"),
        "c" => Some("c"),
        "ct" => Some("ct"),
        _ => None,
    }
}

impl CriticalValueTable {
    /// The table compiled into this build.
    pub fn embedded() -> &'static CriticalValueTable {
        static TABLE: OnceLock<CriticalValueTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            CriticalValueTable::parse(TABLE_SOURCE).expect("embedded critical-value table is valid")
        })
    }

    fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut version = None;
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(v) = comment.trim().strip_prefix("version:") {
                    version = Some(v.trim().to_string());
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 7 {
                return Err(format!("line {}: expected 7 fields", lineno + 1));
            }
            let det = det_key(fields[0]).ok_or(format!("line {}: bad det", lineno + 1))?;
            let k: usize = fields[1].parse().map_err(|e| format!("line {}: {e}", lineno + 1))?;
            let level = fields[2]
                .parse()
                .ok()
                .and_then(Level::from_percent)
                .ok_or(format!("line {}: bad level", lineno + 1))?;
            let mut coef = [0.0; 4];
            for (c, f) in coef.iter_mut().zip(&fields[3..]) {
                *c = f.parse().map_err(|e| format!("line {}: {e}", lineno + 1))?;
            }
            entries.insert((det, k, level), coef);
        }
        Ok(CriticalValueTable {
            version: version.ok_or("missing version line")?,
            entries,
        })
    }

    /// Provenance identifier carried into every report.
    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn coefficients(&self, k: usize, level: Level, det: DeterministicSpec) -> Option<[f64; 4]> {
        self.entries.get(&(det.code(), k, level)).copied()
    }

    pub fn asymptotic(&self, k: usize, level: Level, det: DeterministicSpec) -> Result<f64> {
        self.coefficients(k, level, det)
            .map(|c| c[0])
            .ok_or_else(|| unsupported(k, level, det))
    }

    pub fn value(&self, k: usize, n: usize, level: Level, det: DeterministicSpec) -> Result<f64> {
        if !(1..=MAX_VARIABLES).contains(&k) || n < MIN_SAMPLE {
            return Err(Error::UnsupportedCombination(format!(
                "k = {k}, n = {n} (supported: 1 <= k <= {MAX_VARIABLES}, n >= {MIN_SAMPLE})"
            )));
        }
        let [b0, b1, b2, b3] = self
            .coefficients(k, level, det)
            .ok_or_else(|| unsupported(k, level, det))?;
        let inv = 1.0 / n as f64;
        Ok(b0 + inv * (b1 + inv * (b2 + inv * b3)))
    }

    /// Critical values at 1%, 5% and 10%.
    pub fn values(&self, k: usize, n: usize, det: DeterministicSpec) -> Result<BTreeMap<Level, f64>> {
        Level::ALL
            .iter()
            .map(|&l| self.value(k, n, l, det).map(|v| (l, v)))
            .collect()
    }
}

fn unsupported(k: usize, level: Level, det: DeterministicSpec) -> Error {
    Error::UnsupportedCombination(format!(
        "no response surface for k = {k}, level {level}, deterministic terms `{}`",
        det.code()
    ))
}

/// Finite-sample critical value from the embedded table.
pub fn critical_value(k: usize, n: usize, level: Level, det: DeterministicSpec) -> Result<f64> {
    CriticalValueTable::embedded().value(k, n, level, det)
}

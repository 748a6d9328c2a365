//! Dated, regularly spaced series with a record of the transforms applied to them.
//!
//! Every transform returns a new [`TimeSeries`] and appends exactly one
//! [`TransformTag`] to its lineage. The cointegration guard reads that lineage
//! to detect tests run on differenced data.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sampling frequency of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frequency {
    Quarterly,
    Monthly,
}

impl Frequency {
    pub fn periods_per_year(self) -> u32 {
        match self {
            Frequency::Quarterly => 4,
            Frequency::Monthly => 12,
        }
    }

    pub fn from_periods_per_year(ppy: u32) -> Option<Self> {
        match ppy {
            4 => Some(Frequency::Quarterly),
            12 => Some(Frequency::Monthly),
            _ => None,
        }
    }
}

/// A calendar period: a month (`sub` in 1..=12) or a quarter (`sub` in 1..=4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Period {
    pub year: i32,
    pub sub: u32,
    pub frequency: Frequency,
}

impl Period {
    pub fn new(year: i32, sub: u32, frequency: Frequency) -> Result<Self> {
        if sub == 0 || sub > frequency.periods_per_year() {
            return Err(Error::InvalidSpec(format!(
                "period index {sub} out of range for {frequency:?} data"
            )));
        }
        Ok(Period {
            year,
            sub,
            frequency,
        })
    }

    pub fn monthly(year: i32, month: u32) -> Result<Self> {
        Period::new(year, month, Frequency::Monthly)
    }

    pub fn quarterly(year: i32, quarter: u32) -> Result<Self> {
        Period::new(year, quarter, Frequency::Quarterly)
    }

    /// Periods elapsed since year 0, period 1.
    pub fn ordinal(self) -> i64 {
        let ppy = i64::from(self.frequency.periods_per_year());
        i64::from(self.year) * ppy + i64::from(self.sub) - 1
    }

    fn from_ordinal(ordinal: i64, frequency: Frequency) -> Self {
        let ppy = i64::from(frequency.periods_per_year());
        Period {
            year: ordinal.div_euclid(ppy) as i32,
            sub: (ordinal.rem_euclid(ppy) + 1) as u32,
            frequency,
        }
    }

    pub fn advance(self, steps: i64) -> Self {
        Period::from_ordinal(self.ordinal() + steps, self.frequency)
    }

    /// Signed number of periods from `self` to `other`. Both must share a frequency.
    pub fn periods_until(self, other: Period) -> i64 {
        debug_assert_eq!(self.frequency, other.frequency);
        other.ordinal() - self.ordinal()
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.frequency {
            Frequency::Monthly => write!(f, "{:04}-{:02}", self.year, self.sub),
            Frequency::Quarterly => write!(f, "{:04}Q{}", self.year, self.sub),
        }
    }
}

/// Parses `YYYY-MM` (monthly) or `YYYYQn` (quarterly).
impl FromStr for Period {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("`{s}` is not a YYYY-MM or YYYYQn date"));
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if let Some((year, month)) = s.split_once('-') {
            if year.len() != 4 || month.len() != 2 || !digits(year) || !digits(month) {
                return Err(bad());
            }
            Period::monthly(year.parse().map_err(|_| bad())?, month.parse().map_err(|_| bad())?)
        } else if let Some((year, quarter)) = s.split_once('Q') {
            if year.len() != 4 || quarter.len() != 1 || !digits(year) || !digits(quarter) {
                return Err(bad());
            }
            Period::quarterly(year.parse().map_err(|_| bad())?, quarter.parse().map_err(|_| bad())?)
        } else {
            Err(bad())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransformKind {
    Log,
    /// `x_t - x_{t-gap}` (year-over-year at gap = periods per year).
    SeasonalDiff { gap: usize },
    /// `(1 - L)^order`.
    IteratedDiff { order: usize },
}

impl TransformKind {
    pub fn is_differencing(self) -> bool {
        !matches!(self, TransformKind::Log)
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformKind::Log => write!(f, "log"),
            TransformKind::SeasonalDiff { gap } => write!(f, "S{gap}"),
            TransformKind::IteratedDiff { order } => write!(f, "D{order}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TransformTag {
    #[serde(flatten)]
    pub kind: TransformKind,
    /// Position of this transform in the lineage, starting at 0.
    pub applied_at: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    name: String,
    start: Period,
    values: Vec<f64>,
    lineage: Vec<TransformTag>,
}

impl TimeSeries {
    /// Builds a raw series with empty lineage.
    pub fn new(name: impl Into<String>, start: Period, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(TimeSeries {
            name: name.into(),
            start,
            values,
            lineage: Vec::new(),
        })
    }

    fn derive(&self, start: Period, values: Vec<f64>, kind: TransformKind) -> Self {
        let mut lineage = self.lineage.clone();
        lineage.push(TransformTag {
            kind,
            applied_at: lineage.len(),
        });
        TimeSeries {
            name: self.name.clone(),
            start,
            values,
            lineage,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn start(&self) -> Period {
        self.start
    }

    /// Period of the last observation.
    pub fn end(&self) -> Period {
        self.start.advance(self.values.len() as i64 - 1)
    }

    pub fn period_at(&self, index: usize) -> Period {
        self.start.advance(index as i64)
    }

    pub fn frequency(&self) -> Frequency {
        self.start.frequency
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn lineage(&self) -> &[TransformTag] {
        &self.lineage
    }

    pub fn is_differenced(&self) -> bool {
        self.lineage.iter().any(|t| t.kind.is_differencing())
    }

    /// Human-readable lineage, e.g. `log -> S12`.
    pub fn lineage_label(&self) -> String {
        if self.lineage.is_empty() {
            return "raw".to_string();
        }
        self.lineage
            .iter()
            .map(|t| t.kind.to_string())
            .collect::<Vec<_>>()
            .join(" -> ")
    }

    /// Element-wise natural logarithm.
    pub fn log_transform(&self) -> Result<Self> {
        if let Some((index, &value)) = self.values.iter().enumerate().find(|(_, v)| **v <= 0.0) {
            return Err(Error::NonPositiveValue { index, value });
        }
        let values = self.values.iter().map(|v| v.ln()).collect();
        Ok(self.derive(self.start, values, TransformKind::Log))
    }

    /// `x_t - x_{t-gap}`; the result is `gap` observations shorter.
    pub fn seasonal_difference(&self, gap: usize) -> Result<Self> {
        if gap == 0 {
            return Err(Error::InvalidSpec("seasonal gap must be at least 1".into()));
        }
        if self.len() <= gap {
            return Err(Error::SeriesTooShort {
                needed: gap + 1,
                got: self.len(),
            });
        }
        let values = self
            .values
            .iter()
            .skip(gap)
            .zip(&self.values)
            .map(|(now, then)| now - then)
            .collect();
        Ok(self.derive(
            self.start.advance(gap as i64),
            values,
            TransformKind::SeasonalDiff { gap },
        ))
    }

    /// Applies the one-period difference `order` times.
    pub fn iterated_difference(&self, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidSpec("difference order must be at least 1".into()));
        }
        if self.len() <= order {
            return Err(Error::SeriesTooShort {
                needed: order + 1,
                got: self.len(),
            });
        }
        let mut values = self.values.clone();
        for _ in 0..order {
            values = values.windows(2).map(|w| w[1] - w[0]).collect();
        }
        Ok(self.derive(
            self.start.advance(order as i64),
            values,
            TransformKind::IteratedDiff { order },
        ))
    }

    /// Observations from `from` through `to` inclusive; lineage is kept.
    pub fn window(&self, from: Period, to: Period) -> Result<Self> {
        if from.frequency != self.frequency() || to.frequency != self.frequency() {
            return Err(Error::FrequencyMismatch {
                left: self.frequency().periods_per_year(),
                right: from.frequency.periods_per_year(),
            });
        }
        let lo = self.start.periods_until(from);
        let hi = self.start.periods_until(to);
        if lo < 0 || hi >= self.len() as i64 || lo > hi {
            return Err(Error::NoOverlap);
        }
        Ok(TimeSeries {
            name: self.name.clone(),
            start: from,
            values: self.values[lo as usize..=hi as usize].to_vec(),
            lineage: self.lineage.clone(),
        })
    }
}

/// Trims both series to their common date range.
pub fn align(a: &TimeSeries, b: &TimeSeries) -> Result<(TimeSeries, TimeSeries)> {
    if a.frequency() != b.frequency() {
        return Err(Error::FrequencyMismatch {
            left: a.frequency().periods_per_year(),
            right: b.frequency().periods_per_year(),
        });
    }
    let start = if a.start().ordinal() >= b.start().ordinal() {
        a.start()
    } else {
        b.start()
    };
    let end = if a.end().ordinal() <= b.end().ordinal() {
        a.end()
    } else {
        b.end()
    };
    if start.ordinal() > end.ordinal() {
        return Err(Error::NoOverlap);
    }
    Ok((a.window(start, end)?, b.window(start, end)?))
}

/// Rebuilds levels from seasonal differences given the first `seed.len()`
/// original values (the gap).
pub fn seasonal_undifference(differences: &[f64], seed: &[f64]) -> Vec<f64> {
    let gap = seed.len();
    let mut out = Vec::with_capacity(gap + differences.len());
    out.extend_from_slice(seed);
    for (i, d) in differences.iter().enumerate() {
        let prev = out[i];
        out.push(prev + d);
    }
    debug_assert_eq!(out.len(), gap + differences.len());
    out
}

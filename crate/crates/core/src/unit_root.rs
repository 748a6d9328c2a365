//! Augmented Dickey-Fuller test.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::critical::{CriticalValueTable, DeterministicSpec, Level, MIN_SAMPLE};
use crate::error::{Error, Result};
use crate::regression::{ols_fit, DesignMatrix, OlsFit};
use crate::series::TimeSeries;

/// Fewest observations allowed in the test regression after trimming.
pub const MIN_EFFECTIVE: usize = 10;

pub const LAGGED_LEVEL: &str = "L1.level";

pub fn lagged_difference_name(lag: usize) -> String {
    format!("L{lag}.diff")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRootReport {
    pub series: String,
    pub statistic: f64,
    pub lags: usize,
    pub det: DeterministicSpec,
    pub n_effective: usize,
    pub critical_values: BTreeMap<Level, f64>,
    pub reject_at: BTreeMap<Level, bool>,
    pub critical_value_source: String,
}

/// The test regression `Δx_t` on `x_{t-1}`, deterministic terms and lagged differences.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct AdfRegression {
    pub fit: OlsFit,
    pub statistic: f64,
    pub n_effective: usize,
    pub columns: Vec<String>,
}

pub(crate) fn adf_regression(x: &[f64], lags: usize, det: DeterministicSpec) -> Result<AdfRegression> {
    let n_effective = x.len().saturating_sub(1 + lags);
    if n_effective < MIN_EFFECTIVE {
        return Err(Error::SeriesTooShort {
            needed: lags + 1 + MIN_EFFECTIVE,
            got: x.len(),
        });
    }
    let diff: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    // Observation t (index into x) runs over lags+1 ..= len-1.
    let first = lags + 1;
    let response: Vec<f64> = diff[first - 1..].to_vec();

    let scale = response.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let (lo, hi) = diff
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    if hi - lo <= 1e-12 * scale.max(f64::MIN_POSITIVE) && (det.constant() || scale == 0.0) {
        return Err(Error::DegenerateInput(
            "differences are constant; the series has no innovation variance".into(),
        ));
    }

    let mut design = DesignMatrix::new(n_effective);
    design.push(LAGGED_LEVEL, x[first - 1..x.len() - 1].to_vec())?;
    if det.constant() {
        design.push_intercept()?;
    }
    if det.trend() {
        design.push_trend((first + 1) as f64)?;
    }
    for lag in 1..=lags {
        design.push(
            lagged_difference_name(lag),
            diff[first - 1 - lag..diff.len() - lag].to_vec(),
        )?;
    }

    let fit = ols_fit(&response, &design)?;
    let tss: f64 = response.iter().map(|v| v * v).sum();
    if fit.rss <= 1e-24 * tss.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateInput(
            "test regression fits exactly; residual variance is zero".into(),
        ));
    }
    let statistic = fit
        .t_stat(LAGGED_LEVEL)
        .expect("lagged level is always in the design");
    Ok(AdfRegression {
        statistic,
        n_effective,
        columns: design.names().to_vec(),
        fit,
    })
}

/// Sample size at which the response surface is evaluated.
pub(crate) fn surface_n(n_effective: usize) -> usize {
    n_effective.max(MIN_SAMPLE)
}

pub(crate) fn decisions(statistic: f64, critical: &BTreeMap<Level, f64>) -> BTreeMap<Level, bool> {
    critical
        .iter()
        .map(|(&level, &cv)| (level, statistic < cv))
        .collect()
}

/// ADF unit-root test with caller-chosen lag order and deterministic terms.
pub fn adf_test(x: &TimeSeries, lags: usize, det: DeterministicSpec) -> Result<UnitRootReport> {
    let reg = adf_regression(x.values(), lags, det)?;
    let table = CriticalValueTable::embedded();
    let critical_values = table.values(1, surface_n(reg.n_effective), det)?;
    Ok(UnitRootReport {
        series: x.name().to_string(),
        statistic: reg.statistic,
        lags,
        det,
        n_effective: reg.n_effective,
        reject_at: decisions(reg.statistic, &critical_values),
        critical_values,
        critical_value_source: table.version().to_string(),
    })
}

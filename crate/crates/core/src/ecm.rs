//! Levels regression and the error-correction ARDL model in seasonal differences.
//!
//! Every fitted equation carries an explicit list of the regressors it
//! actually contains, so that an as-coded control set can be audited against
//! the one declared in the text of a study.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regression::{ols_fit, DesignMatrix, OlsFit, INTERCEPT};
use crate::series::{align, Period, TimeSeries};

const MIN_OBS: usize = 10;
pub const ECT_NAME: &str = "ECT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EcmSpec {
    pub seasonal_gap: usize,
    pub ect_lag: usize,
    pub ardl_control_lags: usize,
    /// Linear trend in the levels (long-run) regression.
    pub include_trend: bool,
}

impl Default for EcmSpec {
    fn default() -> Self {
        EcmSpec {
            seasonal_gap: 12,
            ect_lag: 1,
            ardl_control_lags: 1,
            include_trend: false,
        }
    }
}

impl EcmSpec {
    pub fn validate_for(&self, series: &TimeSeries) -> Result<()> {
        let ppy = series.frequency().periods_per_year() as usize;
        if self.seasonal_gap != ppy {
            return Err(Error::InvalidSpec(format!(
                "seasonal gap {} does not match {ppy} periods per year",
                self.seasonal_gap
            )));
        }
        if self.ect_lag == 0 || self.ardl_control_lags == 0 {
            return Err(Error::InvalidSpec("ECT lag and control lags must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcmFit {
    pub spec: EcmSpec,
    pub levels_fit: OlsFit,
    pub ect_series: TimeSeries,
    pub ardl_fit: OlsFit,
    pub ect_coefficient: f64,
    pub ect_t_stat: f64,
    pub control_manifest: Vec<String>,
    /// First period of the short-run regression sample.
    pub sample_start: Period,
    pub n_effective: usize,
}

/// Anything that can report the regressors it was estimated with.
pub trait ControlManifest {
    fn manifest(&self) -> Vec<&str>;
}

impl ControlManifest for OlsFit {
    fn manifest(&self) -> Vec<&str> {
        self.column_names()
    }
}

impl ControlManifest for EcmFit {
    fn manifest(&self) -> Vec<&str> {
        self.control_manifest.iter().map(String::as_str).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub present_undeclared: Vec<String>,
    pub declared_absent: Vec<String>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.present_undeclared.is_empty() && self.declared_absent.is_empty()
    }
}

/// Compares the regressors a fit contains against a declared control set.
pub fn audit_controls<M, S>(fit: &M, declared: &[S]) -> AuditReport
where
    M: ControlManifest + ?Sized,
    S: AsRef<str>,
{
    let present: Vec<&str> = fit.manifest();
    let declared_set: BTreeSet<&str> = declared.iter().map(AsRef::as_ref).collect();
    let present_set: BTreeSet<&str> = present.iter().copied().collect();
    AuditReport {
        present_undeclared: present
            .iter()
            .filter(|p| !declared_set.contains(*p))
            .map(|p| p.to_string())
            .collect(),
        declared_absent: declared
            .iter()
            .map(AsRef::as_ref)
            .filter(|d| !present_set.contains(d))
            .map(str::to_string)
            .collect(),
    }
}

fn seasonal_name(gap: usize, series: &str) -> String {
    format!("S{gap}.{series}")
}

fn lag_name(lag: usize, inner: &str) -> String {
    format!("L{lag}.{inner}")
}

/// Values of `control` for the periods `start ..= start + len - 1`.
fn control_window(control: &TimeSeries, start: Period, len: usize) -> Result<Vec<f64>> {
    if control.frequency() != start.frequency {
        return Err(Error::FrequencyMismatch {
            left: start.frequency.periods_per_year(),
            right: control.frequency().periods_per_year(),
        });
    }
    let end = start.advance(len as i64 - 1);
    control
        .window(start, end)
        .map(|w| w.values().to_vec())
        .map_err(|_| {
            Error::InvalidSpec(format!(
                "control `{}` does not cover {start} .. {end}",
                control.name()
            ))
        })
}

/// Long-run regression of `y` on `x`, an intercept and optionally a trend.
pub fn estimate_levels(y: &TimeSeries, x: &TimeSeries, include_trend: bool) -> Result<OlsFit> {
    estimate_levels_with_controls(y, x, include_trend, &[])
}

/// Levels regression with extra caller-supplied regressors.
pub fn estimate_levels_with_controls(
    y: &TimeSeries,
    x: &TimeSeries,
    include_trend: bool,
    controls: &[TimeSeries],
) -> Result<OlsFit> {
    let (y, x) = align(y, x)?;
    if y.len() < MIN_OBS {
        return Err(Error::SeriesTooShort {
            needed: MIN_OBS,
            got: y.len(),
        });
    }
    if y.name() == x.name() {
        return Err(Error::InvalidSpec(format!("both series are named `{}`", y.name())));
    }
    let mut design = DesignMatrix::new(y.len());
    design.push(x.name(), x.values().to_vec())?;
    if include_trend {
        design.push_trend(1.0)?;
    }
    for c in controls {
        design.push(c.name(), control_window(c, y.start(), y.len())?)?;
    }
    design.push_intercept()?;
    ols_fit(y.values(), &design)
}

/// Error-correction model in seasonal differences.
pub fn estimate_ecm(y: &TimeSeries, x: &TimeSeries, spec: &EcmSpec) -> Result<EcmFit> {
    estimate_ecm_with_controls(y, x, spec, &[])
}

/// Stage one: levels regression. Stage two: `S.y_t` on `S.x_t`, lags
/// `1..=L` of `S.y` and `S.x`, the ECT lagged `ect_lag` periods, any extra
/// controls and an intercept.
pub fn estimate_ecm_with_controls(
    y: &TimeSeries,
    x: &TimeSeries,
    spec: &EcmSpec,
    controls: &[TimeSeries],
) -> Result<EcmFit> {
    spec.validate_for(y)?;
    let (y, x) = align(y, x)?;
    let levels_fit = estimate_levels(&y, &x, spec.include_trend)?;

    let gap = spec.seasonal_gap;
    let lags = spec.ardl_control_lags;
    let n = y.len();
    // Index (into the aligned levels) of the first usable observation.
    let first = (gap + lags).max(spec.ect_lag);
    let n_effective = n.saturating_sub(first);
    let manifest_len = 2 * lags + 3 + controls.len();
    if n_effective < MIN_OBS || n_effective <= manifest_len {
        return Err(Error::SeriesTooShort {
            needed: first + MIN_OBS.max(manifest_len + 1),
            got: n,
        });
    }

    let sy = y.seasonal_difference(gap)?;
    let sx = x.seasonal_difference(gap)?;
    // sy.values()[i] corresponds to level index i + gap.
    let seasonal = |s: &TimeSeries, lag: usize| -> Vec<f64> {
        s.values()[first - gap - lag..n - gap - lag].to_vec()
    };

    let ect_values = levels_fit.residuals[..n - spec.ect_lag].to_vec();
    let ect_series = TimeSeries::new(ECT_NAME, y.start().advance(spec.ect_lag as i64), ect_values)?;

    let mut design = DesignMatrix::new(n_effective);
    design.push(seasonal_name(gap, x.name()), seasonal(&sx, 0))?;
    for lag in 1..=lags {
        design.push(lag_name(lag, &seasonal_name(gap, y.name())), seasonal(&sy, lag))?;
        design.push(lag_name(lag, &seasonal_name(gap, x.name())), seasonal(&sx, lag))?;
    }
    let ect_column = lag_name(spec.ect_lag, ECT_NAME);
    // ect_series.values()[i] corresponds to level index i + ect_lag.
    design.push(
        ect_column.clone(),
        ect_series.values()[first - spec.ect_lag..n - spec.ect_lag].to_vec(),
    )?;
    let sample_start = y.period_at(first);
    for c in controls {
        design.push(c.name(), control_window(c, sample_start, n_effective)?)?;
    }
    design.push_intercept()?;

    let response = sy.values()[first - gap..].to_vec();
    let ardl_fit = ols_fit(&response, &design)?;
    let ect = ardl_fit.term(&ect_column).expect("ECT column is in the design");
    Ok(EcmFit {
        spec: *spec,
        ect_coefficient: ect.estimate,
        ect_t_stat: ect.t_stat,
        control_manifest: design.names().to_vec(),
        levels_fit,
        ect_series,
        ardl_fit,
        sample_start,
        n_effective,
    })
}

/// Names of the stage-two regressors for the given spec, in manifest order.
pub fn expected_manifest(y_name: &str, x_name: &str, spec: &EcmSpec, controls: &[&str]) -> Vec<String> {
    let gap = spec.seasonal_gap;
    let mut names = vec![seasonal_name(gap, x_name)];
    for lag in 1..=spec.ardl_control_lags {
        names.push(lag_name(lag, &seasonal_name(gap, y_name)));
        names.push(lag_name(lag, &seasonal_name(gap, x_name)));
    }
    names.push(lag_name(spec.ect_lag, ECT_NAME));
    names.extend(controls.iter().map(|c| c.to_string()));
    names.push(INTERCEPT.to_string());
    names
}

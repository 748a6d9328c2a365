//! Two-step Engle-Granger cointegration tests and the specification grid.
//!
//! Stage one regresses the normalized-on series on the other plus an intercept
//! (and a linear trend when requested). Stage two is an ADF regression on the
//! stage-one residuals without deterministic terms, compared against the
//! two-variable response surface.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::critical::{CriticalValueTable, DeterministicSpec, Level};
use crate::error::{Error, Result};
use crate::regression::{ols_fit, DesignMatrix, OlsFit};
use crate::series::{align, TimeSeries};
use crate::unit_root::{adf_regression, decisions, surface_n};

pub const MAX_LAGS: usize = 24;
/// Below this many residual-ADF observations a `ShortSample` warning is attached.
pub const SHORT_SAMPLE: usize = 50;
/// Auxiliary R² of the regressor on the deterministic terms above which
/// `NearCollinearStageOne` fires.
pub const COLLINEAR_R2: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Logarithms,
    Untransformed,
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transform::Logarithms => "logarithms",
            Transform::Untransformed => "untransformed",
        })
    }
}

/// Which input is the dependent variable of the stage-one regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EgSpec {
    pub transform: Transform,
    pub normalize_on: Normalization,
    pub lags: usize,
    pub trend_in_stage_one: bool,
}

impl EgSpec {
    pub fn plain(transform: Transform, normalize_on: Normalization) -> Self {
        EgSpec {
            transform,
            normalize_on,
            lags: 0,
            trend_in_stage_one: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lags > MAX_LAGS {
            return Err(Error::InvalidSpec(format!(
                "{} lags requested; at most {MAX_LAGS} are supported",
                self.lags
            )));
        }
        Ok(())
    }

    /// Deterministic case used to look up critical values.
    pub fn critical_value_case(&self) -> DeterministicSpec {
        if self.trend_in_stage_one {
            DeterministicSpec::CONSTANT_TREND
        } else {
            DeterministicSpec::CONSTANT
        }
    }

    /// The twelve cells of the standard robustness table, row-major:
    /// {plain, 12 lags, 12 lags + trend} x {logs, levels} x {first, second}.
    pub fn default_grid() -> Vec<EgSpec> {
        let rows = [(0, false), (12, false), (12, true)];
        let mut grid = Vec::with_capacity(12);
        for (lags, trend) in rows {
            for transform in [Transform::Logarithms, Transform::Untransformed] {
                for normalize_on in [Normalization::First, Normalization::Second] {
                    grid.push(EgSpec {
                        transform,
                        normalize_on,
                        lags,
                        trend_in_stage_one: trend,
                    });
                }
            }
        }
        grid
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WarningCode {
    DifferencedInput,
    ShortSample,
    NearCollinearStageOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuardWarning {
    pub code: WarningCode,
    pub message: String,
}

impl fmt::Display for GuardWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.code, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CointegrationReport {
    pub spec: EgSpec,
    pub dependent: String,
    pub regressor: String,
    pub stage_one: OlsFit,
    pub stage_two: OlsFit,
    pub statistic: f64,
    pub n_effective: usize,
    pub critical_values: BTreeMap<Level, f64>,
    pub reject_at: BTreeMap<Level, bool>,
    pub warnings: Vec<GuardWarning>,
    pub critical_value_source: String,
}

impl CointegrationReport {
    pub fn has_warning(&self, code: WarningCode) -> bool {
        self.warnings.iter().any(|w| w.code == code)
    }

    /// `***` at 1%, `**` at 5%, `*` at 10%.
    pub fn stars(&self) -> &'static str {
        stars(&self.reject_at)
    }
}

pub fn stars(reject_at: &BTreeMap<Level, bool>) -> &'static str {
    let hit = |l| reject_at.get(&l).copied().unwrap_or(false);
    if hit(Level::One) {
        "***"
    } else if hit(Level::Five) {
        "**"
    } else if hit(Level::Ten) {
        "*"
    } else {
        ""
    }
}

/// Warnings about the inputs themselves, independent of any estimation.
pub fn lineage_warnings(series: &[&TimeSeries]) -> Vec<GuardWarning> {
    series
        .iter()
        .filter(|s| s.is_differenced())
        .map(|s| GuardWarning {
            code: WarningCode::DifferencedInput,
            message: format!(
                "series `{}` has been differenced (lineage: {}); the Engle-Granger test is defined on levels of I(1) series and is degenerate on their differences",
                s.name(),
                s.lineage_label()
            ),
        })
        .collect()
}

fn stage_one_design(regressor: &TimeSeries, trend: bool) -> Result<DesignMatrix> {
    let mut design = DesignMatrix::new(regressor.len());
    design.push(regressor.name(), regressor.values().to_vec())?;
    design.push_intercept()?;
    if trend {
        design.push_trend(1.0)?;
    }
    Ok(design)
}

fn collinearity_warning(regressor: &TimeSeries, trend: bool) -> Option<GuardWarning> {
    if !trend {
        return None;
    }
    let mut aux = DesignMatrix::new(regressor.len());
    aux.push_intercept().ok()?;
    aux.push_trend(1.0).ok()?;
    let fit = ols_fit(regressor.values(), &aux).ok()?;
    (fit.r_squared > COLLINEAR_R2).then(|| GuardWarning {
        code: WarningCode::NearCollinearStageOne,
        message: format!(
            "regressor `{}` is nearly collinear with the stage-one trend (auxiliary R² = {:.6})",
            regressor.name(),
            fit.r_squared
        ),
    })
}

/// Engle-Granger test on two series. Guard warnings never alter the statistic.
pub fn engle_granger_test(a: &TimeSeries, b: &TimeSeries, spec: &EgSpec) -> Result<CointegrationReport> {
    spec.validate()?;
    let mut warnings = lineage_warnings(&[a, b]);

    let (a, b) = align(a, b)?;
    let (a, b) = match spec.transform {
        Transform::Logarithms => (a.log_transform()?, b.log_transform()?),
        Transform::Untransformed => (a, b),
    };
    let (dependent, regressor) = match spec.normalize_on {
        Normalization::First => (&a, &b),
        Normalization::Second => (&b, &a),
    };
    if dependent.name() == regressor.name() {
        return Err(Error::InvalidSpec(format!(
            "both series are named `{}`",
            dependent.name()
        )));
    }

    let design = stage_one_design(regressor, spec.trend_in_stage_one)?;
    let stage_one = ols_fit(dependent.values(), &design)?;
    warnings.extend(collinearity_warning(regressor, spec.trend_in_stage_one));

    let reg = adf_regression(&stage_one.residuals, spec.lags, DeterministicSpec::NONE)?;
    if reg.n_effective < SHORT_SAMPLE {
        warnings.push(GuardWarning {
            code: WarningCode::ShortSample,
            message: format!(
                "only {} observations in the residual test regression (fewer than {SHORT_SAMPLE})",
                reg.n_effective
            ),
        });
    }

    let table = CriticalValueTable::embedded();
    let critical_values = table.values(2, surface_n(reg.n_effective), spec.critical_value_case())?;
    Ok(CointegrationReport {
        spec: *spec,
        dependent: dependent.name().to_string(),
        regressor: regressor.name().to_string(),
        statistic: reg.statistic,
        n_effective: reg.n_effective,
        reject_at: decisions(reg.statistic, &critical_values),
        critical_values,
        warnings,
        stage_one,
        stage_two: reg.fit,
        critical_value_source: table.version().to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub spec: EgSpec,
    pub report: Option<CointegrationReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub cells: usize,
    pub failed: usize,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub median: Option<f64>,
    pub rejections: BTreeMap<Level, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub first: String,
    pub second: String,
    pub cells: Vec<GridCell>,
    pub summary: GridSummary,
}

fn median(sorted: &[f64]) -> Option<f64> {
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2]),
        _ => Some(0.5 * (sorted[n / 2 - 1] + sorted[n / 2])),
    }
}

fn summarize(cells: &[GridCell]) -> GridSummary {
    let reports: Vec<&CointegrationReport> = cells.iter().filter_map(|c| c.report.as_ref()).collect();
    let mut stats: Vec<f64> = reports.iter().map(|r| r.statistic).collect();
    stats.sort_by(f64::total_cmp);
    let rejections = Level::ALL
        .iter()
        .map(|&l| (l, reports.iter().filter(|r| r.reject_at[&l]).count()))
        .collect();
    GridSummary {
        cells: cells.len(),
        failed: cells.len() - reports.len(),
        min: stats.first().copied(),
        max: stats.last().copied(),
        median: median(&stats),
        rejections,
    }
}

/// Runs every spec; a failing cell is recorded rather than aborting the grid.
pub fn run_spec_grid(a: &TimeSeries, b: &TimeSeries, grid: &[EgSpec]) -> Result<GridReport> {
    if grid.is_empty() {
        return Err(Error::InvalidSpec("specification grid is empty".into()));
    }
    let cells: Vec<GridCell> = grid
        .par_iter()
        .map(|spec| match engle_granger_test(a, b, spec) {
            Ok(report) => GridCell {
                spec: *spec,
                report: Some(report),
                error: None,
            },
            Err(e) => GridCell {
                spec: *spec,
                report: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let summary = summarize(&cells);
    Ok(GridReport {
        first: a.name().to_string(),
        second: b.name().to_string(),
        cells,
        summary,
    })
}

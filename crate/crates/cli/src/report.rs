//! Machine (JSON, CSV) and human renderings of command results.

use std::collections::BTreeMap;

use coint_core::cointegration::stars;
use coint_core::{CointegrationReport, ExperimentResult, GridReport, Level, Normalization, OlsFit, UnitRootReport};
use serde_json::{Number, Value};

/// Significant digits in machine formats.
pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn round_sig(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v).parse().expect("formatted float parses")
}

/// Rounds every float in a JSON tree to [`SIGNIFICANT_DIGITS`].
pub fn round_json(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let v = n.as_f64().expect("f64 number");
            *value = Number::from_f64(round_sig(v)).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// A float as emitted in CSV: same digits as JSON, empty when not finite.
pub fn csv_number(v: f64) -> String {
    if v.is_finite() {
        round_sig(v).to_string()
    } else {
        String::new()
    }
}

fn csv_optional(v: Option<f64>) -> String {
    v.map(csv_number).unwrap_or_default()
}

pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

pub const GRID_COLUMNS: [&str; 10] = [
    "transform", "normalized_on", "lags", "trend", "statistic", "stars", "cv1", "cv5", "cv10", "warnings",
];

fn warning_codes(report: &CointegrationReport) -> String {
    report
        .warnings
        .iter()
        .map(|w| format!("{:?}", w.code))
        .collect::<Vec<_>>()
        .join(";")
}

fn cv(map: &BTreeMap<Level, f64>, level: Level) -> String {
    csv_optional(map.get(&level).copied())
}

pub fn eg_row(report: &CointegrationReport) -> Vec<String> {
    vec![
        report.spec.transform.to_string(),
        report.dependent.clone(),
        report.spec.lags.to_string(),
        report.spec.trend_in_stage_one.to_string(),
        csv_number(report.statistic),
        report.stars().to_string(),
        cv(&report.critical_values, Level::One),
        cv(&report.critical_values, Level::Five),
        cv(&report.critical_values, Level::Ten),
        warning_codes(report),
    ]
}

pub fn grid_rows(grid: &GridReport) -> Vec<Vec<String>> {
    grid.cells
        .iter()
        .map(|cell| match (&cell.report, &cell.error) {
            (Some(r), _) => eg_row(r),
            (None, error) => vec![
                cell.spec.transform.to_string(),
                match cell.spec.normalize_on {
                    Normalization::First => grid.first.clone(),
                    Normalization::Second => grid.second.clone(),
                },
                cell.spec.lags.to_string(),
                cell.spec.trend_in_stage_one.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                format!("error: {}", error.as_deref().unwrap_or("unknown")),
            ],
        })
        .collect()
}

pub const ADF_COLUMNS: [&str; 9] = ["series", "det", "lags", "n_effective", "statistic", "stars", "cv1", "cv5", "cv10"];

pub fn adf_row(r: &UnitRootReport) -> Vec<String> {
    vec![
        r.series.clone(),
        r.det.code().to_string(),
        r.lags.to_string(),
        r.n_effective.to_string(),
        csv_number(r.statistic),
        stars(&r.reject_at).to_string(),
        cv(&r.critical_values, Level::One),
        cv(&r.critical_values, Level::Five),
        cv(&r.critical_values, Level::Ten),
    ]
}

pub const TERM_COLUMNS: [&str; 5] = ["stage", "term", "estimate", "std_error", "t_stat"];

pub fn term_rows(stage: &str, fit: &OlsFit) -> Vec<Vec<String>> {
    fit.terms
        .iter()
        .map(|t| {
            vec![
                stage.to_string(),
                t.name.clone(),
                csv_number(t.estimate),
                csv_number(t.std_error),
                csv_number(t.t_stat),
            ]
        })
        .collect()
}

pub const RATE_COLUMNS: [&str; 4] = ["level", "rate", "lo", "hi"];

pub fn rate_rows(r: &ExperimentResult) -> Vec<Vec<String>> {
    r.rejection_rate
        .iter()
        .map(|(level, rate)| {
            let (lo, hi) = r.wilson_interval_95[level];
            vec![level.to_string(), csv_number(*rate), csv_number(lo), csv_number(hi)]
        })
        .collect()
}

fn human_stat(statistic: f64, stars: &str) -> String {
    format!("{statistic:.3}{stars}")
}

pub fn human_eg(r: &CointegrationReport) -> String {
    let mut out = format!(
        "Engle-Granger: {} on {} ({}, lags {}, trend {})\n  statistic {}  n {}\n  critical values 1% {:.3}  5% {:.3}  10% {:.3}\n",
        r.dependent,
        r.regressor,
        r.spec.transform,
        r.spec.lags,
        r.spec.trend_in_stage_one,
        human_stat(r.statistic, r.stars()),
        r.n_effective,
        r.critical_values[&Level::One],
        r.critical_values[&Level::Five],
        r.critical_values[&Level::Ten],
    );
    for w in &r.warnings {
        out.push_str(&format!("  warning: {w}\n"));
    }
    out
}

pub fn human_adf(r: &UnitRootReport) -> String {
    format!(
        "ADF: {} (det {}, lags {})\n  statistic {}  n {}\n  critical values 1% {:.3}  5% {:.3}  10% {:.3}\n",
        r.series,
        r.det.code(),
        r.lags,
        human_stat(r.statistic, stars(&r.reject_at)),
        r.n_effective,
        r.critical_values[&Level::One],
        r.critical_values[&Level::Five],
        r.critical_values[&Level::Ten],
    )
}

pub fn human_grid(g: &GridReport) -> String {
    let mut out = format!(
        "{:<14} {:<16} {:>4} {:>6} {:>10}\n",
        "transform", "normalized_on", "lags", "trend", "statistic"
    );
    for (cell, row) in g.cells.iter().zip(grid_rows(g)) {
        let stat = match &cell.report {
            Some(r) => human_stat(r.statistic, r.stars()),
            None => "failed".to_string(),
        };
        out.push_str(&format!("{:<14} {:<16} {:>4} {:>6} {:>10}\n", row[0], row[1], row[2], row[3], stat));
        if let Some(r) = &cell.report {
            for w in &r.warnings {
                out.push_str(&format!("    warning: {w}\n"));
            }
        }
    }
    let s = &g.summary;
    if let (Some(min), Some(max), Some(median)) = (s.min, s.max, s.median) {
        out.push_str(&format!("range {min:.3} .. {max:.3}, median {median:.3}\n"));
    }
    out.push_str("*** 1%, ** 5%, * 10%\n");
    out
}

pub fn human_rates(title: &str, r: &ExperimentResult) -> String {
    let mut out = format!("{title}: {} replications, seed {}\n", r.replications, r.seed);
    for (level, rate) in &r.rejection_rate {
        let (lo, hi) = r.wilson_interval_95[level];
        out.push_str(&format!("  {level:>3}: rate {rate:.3}  95% [{lo:.3}, {hi:.3}]\n"));
    }
    if r.guard_hits > 0 {
        out.push_str(&format!("  DifferencedInput warning in {} replications\n", r.guard_hits));
    }
    if r.failures > 0 {
        out.push_str(&format!("  {} replications failed\n", r.failures));
    }
    out
}

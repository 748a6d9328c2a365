//! Reading `date,value` CSV files into [`TimeSeries`].

use std::fs::File;
use std::io::Read;
use std::path::Path;

use coint_core::{Period, TimeSeries};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IngestError {
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("file has no data rows")]
    EmptyFile,
    #[error("line {line}: {reason}")]
    ParseError { line: u64, reason: String },
    #[error("expected {expected}, found {found}")]
    GapInDates { expected: String, found: String },
}

/// Parses a series from any reader. Header is line 1.
pub fn parse_series(name: &str, reader: impl Read) -> Result<TimeSeries, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().map_err(|e| csv_error(&e, 1))?.clone();
    if header.is_empty() {
        return Err(IngestError::EmptyFile);
    }
    if header.len() != 2 || &header[0] != "date" || &header[1] != "value" {
        return Err(IngestError::ParseError {
            line: 1,
            reason: format!("header must be `date,value`, got `{}`", header.iter().collect::<Vec<_>>().join(",")),
        });
    }

    let mut start: Option<Period> = None;
    let mut prev: Option<Period> = None;
    let mut values = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(&e, 0))?;
        let line = record.position().map_or(0, |p| p.line());
        let parse_error = |reason: String| IngestError::ParseError { line, reason };
        if record.len() != 2 {
            return Err(parse_error(format!("expected 2 fields, got {}", record.len())));
        }
        let period: Period = record[0].parse().map_err(|e: coint_core::Error| parse_error(e.to_string()))?;
        let value: f64 = record[1]
            .parse()
            .map_err(|_| parse_error(format!("`{}` is not a number", &record[1])))?;
        if !value.is_finite() {
            return Err(parse_error(format!("`{}` is not finite", &record[1])));
        }
        if let Some(p) = prev {
            if period.frequency != p.frequency {
                return Err(parse_error(format!("{period} changes frequency after {p}")));
            }
            let expected = p.advance(1);
            match p.periods_until(period) {
                1 => {}
                n if n < 1 => return Err(parse_error(format!("{period} does not follow {p}"))),
                _ => {
                    return Err(IngestError::GapInDates {
                        expected: expected.to_string(),
                        found: period.to_string(),
                    })
                }
            }
        }
        start.get_or_insert(period);
        prev = Some(period);
        values.push(value);
    }
    let start = start.ok_or(IngestError::EmptyFile)?;
    TimeSeries::new(name, start, values).map_err(|e| IngestError::ParseError {
        line: 0,
        reason: e.to_string(),
    })
}

/// Reads a series from `path`, named after the file stem.
pub fn ingest_csv(path: &Path) -> Result<TimeSeries, IngestError> {
    let file = File::open(path).map_err(|e| IngestError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".to_string());
    parse_series(&name, file)
}

fn csv_error(e: &csv::Error, fallback_line: u64) -> IngestError {
    let line = e.position().map_or(fallback_line, |p| p.line());
    IngestError::ParseError {
        line,
        reason: e.to_string(),
    }
}

//! Reading p-value samples from files.

use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use dos_core::PValueSample;

use crate::error::{HarnessError, Result};

/// Input layout: one value per line, or a CSV column addressed by header
/// name (falling back to a 0-based index when the name is numeric and no
/// header matches).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputFormat {
    PlainLines,
    Csv { column: String },
}

impl FromStr for InputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "plain" {
            Ok(InputFormat::PlainLines)
        } else if let Some(column) = s.strip_prefix("csv:") {
            if column.is_empty() {
                Err(HarnessError::Config(
                    "csv format needs a column: csv:NAME".into(),
                ))
            } else {
                Ok(InputFormat::Csv {
                    column: column.to_string(),
                })
            }
        } else {
            Err(HarnessError::Config(format!(
                "unknown input format {s:?}; expected plain or csv:COLUMN"
            )))
        }
    }
}

/// Read, parse, and validate a p-value file. Blank lines are skipped;
/// errors carry 1-based line numbers.
pub fn read_pvalues(path: &Path, format: &InputFormat) -> Result<PValueSample> {
    let values = match format {
        InputFormat::PlainLines => read_plain(path)?,
        InputFormat::Csv { column } => read_csv(path, column)?,
    };
    PValueSample::new(values).map_err(HarnessError::from)
}

fn parse_value(path: &Path, line: u64, raw: &str) -> Result<f64> {
    let v: f64 = raw.trim().parse().map_err(|_| HarnessError::Parse {
        path: path.display().to_string(),
        line,
        message: format!("not a number: {raw:?}"),
    })?;
    if v.is_nan() || !(0.0..=1.0).contains(&v) {
        return Err(HarnessError::Parse {
            path: path.display().to_string(),
            line,
            message: format!("p-value {v} outside [0, 1]"),
        });
    }
    Ok(v)
}

fn read_plain(path: &Path) -> Result<Vec<f64>> {
    let file = std::fs::File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut values = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| HarnessError::io(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        values.push(parse_value(path, i as u64 + 1, trimmed)?);
    }
    Ok(values)
}

fn read_csv(path: &Path, column: &str) -> Result<Vec<f64>> {
    let file = std::fs::File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .clone();
    let col = headers
        .iter()
        .position(|h| h == column)
        .or_else(|| {
            column
                .parse::<usize>()
                .ok()
                .filter(|&i| i < headers.len())
        })
        .ok_or_else(|| {
            HarnessError::Config(format!(
                "column {column:?} not found; headers are {headers:?}"
            ))
        })?;
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record
            .position()
            .map(|p| p.line())
            .unwrap_or(0);
        let raw = record.get(col).ok_or_else(|| HarnessError::Parse {
            path: path.display().to_string(),
            line,
            message: format!("missing column {col}"),
        })?;
        values.push(parse_value(path, line, raw)?);
    }
    Ok(values)
}

fn csv_error(path: &Path, e: csv::Error) -> HarnessError {
    let line = match e.kind() {
        csv::ErrorKind::Utf8 { pos, .. } | csv::ErrorKind::UnequalLengths { pos, .. } => {
            pos.as_ref().map(|p| p.line()).unwrap_or(0)
        }
        _ => 0,
    };
    match e.into_kind() {
        csv::ErrorKind::Io(io) => HarnessError::io(path, io),
        other => HarnessError::Parse {
            path: path.display().to_string(),
            line,
            message: format!("{other:?}"),
        },
    }
}

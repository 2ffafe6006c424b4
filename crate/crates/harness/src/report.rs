//! Report rendering: lossless CSV and paper-style markdown tables.
//!
//! CSV reports print floats with Rust's shortest round-trip formatting, so
//! parsing the file back reproduces every value bit-for-bit. Markdown
//! tables mirror the usual layout: estimator columns and BIAS / SD / RMSE
//! rows at one decimal (FDR and relative power, when present, use more
//! digits since one decimal would erase them).

use crate::error::{HarnessError, Result};
use crate::experiment::{AggregateStats, EstimatorStats};

fn header_lines(stats: &AggregateStats) -> String {
    let mut out = String::new();
    out.push_str(&format!("# scenario: {}\n", stats.scenario));
    out.push_str(&format!("# n: {}\n", stats.n));
    out.push_str(&format!("# n_false: {}\n", stats.n_false));
    out.push_str(&format!("# replicates: {}\n", stats.replicates));
    out.push_str(&format!("# seed: {}\n", stats.master_seed));
    if let Some(level) = stats.level {
        out.push_str(&format!("# level: {level}\n"));
    }
    out
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Full-precision CSV with `# key: value` header lines.
pub fn render_csv(stats: &AggregateStats) -> String {
    let mut out = header_lines(stats);
    out.push_str("estimator,mean,bias,sd,rmse,fdr,relative_power\n");
    for e in &stats.estimators {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            e.label,
            e.mean,
            e.bias,
            e.sd,
            e.rmse,
            opt(e.fdr),
            opt(e.relative_power)
        ));
    }
    out
}

/// Parse a CSV report produced by [`render_csv`] back into stats.
pub fn parse_csv(text: &str) -> Result<AggregateStats> {
    let mut scenario = String::new();
    let mut n = 0usize;
    let mut n_false = 0usize;
    let mut replicates = 0usize;
    let mut master_seed = 0u64;
    let mut level = None;
    let mut estimators = Vec::new();

    let bad = |line: usize, message: String| HarnessError::Parse {
        path: "<csv report>".into(),
        line: line as u64 + 1,
        message,
    };

    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let (key, value) = rest
                .split_once(':')
                .ok_or_else(|| bad(i, "header line without ':'".into()))?;
            let value = value.trim();
            match key.trim() {
                "scenario" => scenario = value.to_string(),
                "n" => n = value.parse().map_err(|e| bad(i, format!("{e}")))?,
                "n_false" => n_false = value.parse().map_err(|e| bad(i, format!("{e}")))?,
                "replicates" => {
                    replicates = value.parse().map_err(|e| bad(i, format!("{e}")))?
                }
                "seed" => master_seed = value.parse().map_err(|e| bad(i, format!("{e}")))?,
                "level" => level = Some(value.parse().map_err(|e| bad(i, format!("{e}")))?),
                other => return Err(bad(i, format!("unknown header key {other:?}"))),
            }
            continue;
        }
        if line.starts_with("estimator,") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(bad(i, format!("expected 7 fields, got {}", fields.len())));
        }
        let num = |j: usize| -> Result<f64> {
            fields[j]
                .parse()
                .map_err(|e| bad(i, format!("field {j}: {e}")))
        };
        let opt_num = |j: usize| -> Result<Option<f64>> {
            if fields[j].is_empty() {
                Ok(None)
            } else {
                num(j).map(Some)
            }
        };
        estimators.push(EstimatorStats {
            label: fields[0].to_string(),
            mean: num(1)?,
            bias: num(2)?,
            sd: num(3)?,
            rmse: num(4)?,
            fdr: opt_num(5)?,
            relative_power: opt_num(6)?,
        });
    }

    Ok(AggregateStats {
        scenario,
        n,
        n_false,
        replicates,
        master_seed,
        level,
        estimators,
    })
}

/// Markdown table in the conventional benchmark layout: one column per estimator, rows
/// BIAS / SD / RMSE (plus FDR and REL-POWER for FDR experiments).
pub fn render_markdown(stats: &AggregateStats) -> String {
    let mut out = header_lines(stats);
    out.push('\n');
    out.push_str("| |");
    for e in &stats.estimators {
        out.push_str(&format!(" {} |", e.label));
    }
    out.push('\n');
    out.push_str("|---|");
    for _ in &stats.estimators {
        out.push_str("---|");
    }
    out.push('\n');

    let row = |name: &str, f: &dyn Fn(&EstimatorStats) -> String| {
        let mut line = format!("| {name} |");
        for e in &stats.estimators {
            line.push_str(&format!(" {} |", f(e)));
        }
        line.push('\n');
        line
    };
    out.push_str(&row("BIAS", &|e| format!("{:.1}", e.bias)));
    out.push_str(&row("SD", &|e| format!("{:.1}", e.sd)));
    out.push_str(&row("RMSE", &|e| format!("{:.1}", e.rmse)));
    if stats.estimators.iter().any(|e| e.fdr.is_some()) {
        out.push_str(&row("FDR", &|e| {
            e.fdr.map(|v| format!("{v:.4}")).unwrap_or_default()
        }));
        out.push_str(&row("REL-POWER", &|e| {
            e.relative_power
                .map(|v| format!("{v:.3}"))
                .unwrap_or_default()
        }));
    }
    out
}

/// CSV for a c-sensitivity sweep: one block of rows per c, with a leading
/// `c` column.
pub fn render_sweep_csv(rows: &[(f64, AggregateStats)]) -> String {
    let mut out = String::new();
    if let Some((_, first)) = rows.first() {
        out.push_str(&header_lines(first));
    }
    out.push_str("c,estimator,mean,bias,sd,rmse\n");
    for (c, stats) in rows {
        for e in &stats.estimators {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c, e.label, e.mean, e.bias, e.sd, e.rmse
            ));
        }
    }
    out
}

/// Markdown for a c-sensitivity sweep: estimator columns, one MEAN row per c.
pub fn render_sweep_markdown(rows: &[(f64, AggregateStats)]) -> String {
    let mut out = String::new();
    if let Some((_, first)) = rows.first() {
        out.push_str(&header_lines(first));
    }
    out.push('\n');
    if rows.is_empty() {
        return out;
    }
    out.push_str("| c |");
    for e in &rows[0].1.estimators {
        out.push_str(&format!(" {} mean |", e.label));
    }
    out.push('\n');
    out.push_str("|---|");
    for _ in &rows[0].1.estimators {
        out.push_str("---|");
    }
    out.push('\n');
    for (c, stats) in rows {
        out.push_str(&format!("| {c} |"));
        for e in &stats.estimators {
            out.push_str(&format!(" {:.1} |", e.mean));
        }
        out.push('\n');
    }
    out
}

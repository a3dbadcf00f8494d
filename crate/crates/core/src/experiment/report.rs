use std::fmt::Write as _;
use std::path::Path;

use super::{ExperimentError, OutputPaths, Report, ResultRow};

pub const CSV_HEADER: &str = "algorithm,energy_kwh,norm_energy,saving_pct,busy_time_s,unplaced,wall_ms";

/// Renders rows as CSV with three decimals for every real column. An
/// unrecorded wall time is left empty.
pub fn format_csv(rows: &[ResultRow]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let wall = row.wall_ms.map(|w| w.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{:.3},{:.3},{:.3},{},{},{}",
            csv_field(&row.algorithm),
            row.energy_kwh,
            row.norm_energy,
            fix_negative_zero(row.saving_pct),
            row.busy_time_s,
            row.unplaced,
            wall
        );
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `-0.000` would otherwise appear for savings within rounding of zero.
fn fix_negative_zero(x: f64) -> f64 {
    if x.abs() < 0.0005 {
        0.0
    } else {
        x
    }
}

/// Writes the CSV and/or JSON report to the configured paths.
pub fn emit_report(report: &Report, paths: &OutputPaths) -> Result<(), ExperimentError> {
    if let Some(csv) = &paths.csv {
        write(csv, format_csv(&report.rows))?;
    }
    if let Some(json) = &paths.json {
        let mut text = serde_json::to_string_pretty(report).map_err(|e| ExperimentError::Io(e.to_string()))?;
        text.push('\n');
        write(json, text)?;
    }
    Ok(())
}

fn write(path: &Path, contents: String) -> Result<(), ExperimentError> {
    std::fs::write(path, contents).map_err(|e| ExperimentError::Io(format!("{}: {e}", path.display())))
}

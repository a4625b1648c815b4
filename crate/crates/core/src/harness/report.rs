//! JSON and markdown output of a LODO report.
//!
//! Percentages are truncated, not rounded, to two decimals.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::lodo::{ComparisonRow, LodoReport, ScenarioReport};
use crate::error::{Error, Result};
use crate::recommender::{AverageBaseline, Scenario};

/// `wins / n` as a percentage truncated to two decimals, e.g. 228/288 ->
/// "79.16".
pub fn format_rate(wins: usize, n: usize) -> String {
    if n == 0 {
        return "0.00".into();
    }
    let hundredths = (wins as u128 * 10_000) / n as u128;
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}

/// A fraction in [0, 1] as a truncated percentage.
pub fn format_fraction(x: f64) -> String {
    let hundredths = (x * 10_000.0 + 1e-7).floor().max(0.0) as u64;
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}

/// One row of a fixed-configuration table.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedRow {
    pub fixed: String,
    pub n: usize,
    pub mlrs_wins: usize,
    pub majority_wins: usize,
    pub average: Option<AverageBaseline>,
}

impl From<&ScenarioReport> for FixedRow {
    fn from(s: &ScenarioReport) -> Self {
        let fixed = match s.scenario {
            Scenario::Pool { fixed_ds } => fixed_ds.to_string(),
            Scenario::Ds { fixed_pool } => fixed_pool.to_string(),
            Scenario::PoolDs => "-".into(),
        };
        FixedRow {
            fixed,
            n: s.n,
            mlrs_wins: s.mlrs_wins,
            majority_wins: s.majority_wins,
            average: Some(s.average),
        }
    }
}

/// Columns: fixed config, MLRS, Majority, then the average baseline as a
/// win-rate average (with mean wins) and as an accuracy average.
pub fn fixed_table_markdown(fixed_header: &str, mlrs_header: &str, rows: &[FixedRow]) -> String {
    let mut s = format!(
        "| {fixed_header} | {mlrs_header} | Majority | Average (win rate, mean wins) | Average (accuracy) |\n|---|---|---|---|---|\n"
    );
    for r in rows {
        let (avg_rate, avg_acc) = match &r.average {
            Some(a) => (
                format!("{} ({:.2})", format_fraction(a.win_rate), a.mean_wins),
                format_fraction(a.accuracy),
            ),
            None => ("-".into(), "-".into()),
        };
        let _ = writeln!(
            s,
            "| {} | {} ({}) | {} ({}) | {avg_rate} | {avg_acc} |",
            r.fixed,
            format_rate(r.mlrs_wins, r.n),
            r.mlrs_wins,
            format_rate(r.majority_wins, r.n),
            r.majority_wins,
        );
    }
    s
}

pub fn comparison_table_markdown(rows: &[ComparisonRow]) -> String {
    let mut s = String::from("| Algorithm | Win rate (wins) |\n|---|---|\n");
    for r in rows {
        let _ = writeln!(
            s,
            "| {} | {} ({}) |",
            r.label,
            format_rate(r.wins, r.n),
            r.wins
        );
    }
    s
}

pub fn report_markdown(report: &LodoReport) -> String {
    let pick = |f: fn(&Scenario) -> bool| -> Vec<FixedRow> {
        report
            .scenarios
            .iter()
            .filter(|s| f(&s.scenario))
            .map(FixedRow::from)
            .collect()
    };
    let mut s = format!(
        "# Leave-one-dataset-out report\n\nDatasets: {}. Seed: {}. Config hash: {}.\n\n",
        report.n_datasets, report.seed, report.config_hash
    );
    s.push_str("Percentages are truncated to two decimals. A win is an accuracy equal to the best candidate within tolerance; ties count as wins.\n\n");

    s.push_str("## Pool recommendation with a fixed selection method\n\n");
    s.push_str(&fixed_table_markdown(
        "DS method",
        "MLRS-P",
        &pick(|sc| matches!(sc, Scenario::Pool { .. })),
    ));
    s.push_str("\n## Selection-method recommendation with a fixed pool\n\n");
    s.push_str(&fixed_table_markdown(
        "Pool scheme",
        "MLRS-DS",
        &pick(|sc| matches!(sc, Scenario::Ds { .. })),
    ));
    if let Some(c) = report
        .scenarios
        .iter()
        .find(|s| s.scenario == Scenario::PoolDs)
    {
        s.push_str("\n## Pool and selection-method recommendation\n\n");
        s.push_str(&comparison_table_markdown(&c.comparisons));
        let majority = FixedRow::from(c);
        let _ = writeln!(
            s,
            "\nMajority: {} ({}). Average: {} ({:.2} mean wins), accuracy average {}.",
            format_rate(majority.majority_wins, majority.n),
            majority.majority_wins,
            format_fraction(c.average.win_rate),
            c.average.mean_wins,
            format_fraction(c.average.accuracy),
        );
    }
    s.push_str("\n## Exclusions\n\n");
    if report.exclusions.is_empty() {
        s.push_str("none\n");
    } else {
        for e in &report.exclusions {
            let _ = writeln!(s, "- {}: {}", e.dataset_id, e.reason);
        }
    }
    s
}

/// Writes `lodo_report.json` and `lodo_report.md` into `dir`.
pub fn write_report(report: &LodoReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let json = dir.join("lodo_report.json");
    fs::write(&json, serde_json::to_string_pretty(report)?).map_err(|e| Error::io(&json, e))?;
    let md = dir.join("lodo_report.md");
    fs::write(&md, report_markdown(report)).map_err(|e| Error::io(&md, e))
}

pub fn read_report(path: &Path) -> Result<LodoReport> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rates_truncate() {
        assert_eq!(format_rate(228, 288), "79.16");
        assert_eq!(format_rate(62, 288), "21.52");
        assert_eq!(format_rate(0, 288), "0.00");
        assert_eq!(format_rate(288, 288), "100.00");
        assert_eq!(format_rate(1, 3), "33.33");
        assert_eq!(format_fraction(0.5), "50.00");
        assert_eq!(format_fraction(2.0 / 3.0), "66.66");
    }
}

//! Check reports and their CSV / JSON forms.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::CliError;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// One evaluated inequality or equality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    pub check: String,
    pub inputs: Value,
    pub lhs: f64,
    pub rhs: f64,
    /// Nonnegative exactly when the check holds without tolerance.
    pub slack: f64,
    pub pass: bool,
}

fn finite(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.clamp(f64::MIN, f64::MAX)
    }
}

impl Record {
    fn build(check: &str, inputs: Value, lhs: f64, rhs: f64, slack: f64, pass: bool) -> Self {
        let valid = !(lhs.is_nan() || rhs.is_nan() || slack.is_nan());
        Record {
            check: check.to_string(),
            inputs,
            lhs: finite(lhs),
            rhs: finite(rhs),
            slack: finite(slack),
            pass: pass && valid,
        }
    }

    /// `lhs ≤ rhs + tol`.
    pub fn at_most(check: &str, inputs: Value, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = rhs - lhs;
        Self::build(check, inputs, lhs, rhs, slack, slack >= -tol)
    }

    /// `lhs ≥ rhs − tol`.
    pub fn at_least(check: &str, inputs: Value, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = lhs - rhs;
        Self::build(check, inputs, lhs, rhs, slack, slack >= -tol)
    }

    /// `|lhs − rhs| ≤ tol`; the slack is `−|lhs − rhs|`.
    pub fn equal(check: &str, inputs: Value, lhs: f64, rhs: f64, tol: f64) -> Self {
        let gap = (lhs - rhs).abs();
        Self::build(check, inputs, lhs, rhs, -gap, gap <= tol)
    }

    /// `|lhs − rhs| ≤ rel · |rhs|`.
    pub fn relative(check: &str, inputs: Value, lhs: f64, rhs: f64, rel: f64) -> Self {
        let allowed = rel * rhs.abs();
        let slack = allowed - (lhs - rhs).abs();
        Self::build(check, inputs, lhs, rhs, slack, slack >= 0.0)
    }

    /// A yes/no outcome, recorded as `lhs = 1` for yes against `rhs = 1`.
    pub fn flag(check: &str, inputs: Value, outcome: bool) -> Self {
        let lhs = if outcome { 1.0 } else { 0.0 };
        Self::build(check, inputs, lhs, 1.0, lhs - 1.0, outcome)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub pass_count: usize,
    pub fail_count: usize,
    /// Fitted quantities, finite values only.
    pub fits: BTreeMap<String, f64>,
    pub verdicts: BTreeMap<String, String>,
}

/// Rows of one CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub label: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(label: impl Into<String>, header: &[&str]) -> Self {
        Table { label: label.into(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
        writer.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            writer.write_record(row).map_err(io)?;
        }
        let bytes = writer.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub schema_version: u32,
    pub experiment: ExperimentKind,
    pub config_digest: String,
    pub seed: Option<u64>,
    pub records: Vec<Record>,
    pub summary: Summary,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

impl CheckReport {
    pub fn new(
        config: &ExperimentConfig,
        records: Vec<Record>,
        tables: Vec<Table>,
        fits: BTreeMap<String, f64>,
        verdicts: BTreeMap<String, String>,
    ) -> Self {
        let pass_count = records.iter().filter(|r| r.pass).count();
        CheckReport {
            schema_version: REPORT_SCHEMA_VERSION,
            experiment: config.experiment,
            config_digest: config.digest(),
            seed: config.seed,
            summary: Summary {
                pass_count,
                fail_count: records.len() - pass_count,
                fits: fits.into_iter().filter(|(_, v)| v.is_finite()).collect(),
                verdicts,
            },
            records,
            tables,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail_count == 0
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// File name of each table: `<experiment>.csv` for a single table,
    /// `<experiment>-<label>.csv` otherwise.
    pub fn csv_names(&self) -> Vec<String> {
        let name = self.experiment.name();
        if self.tables.len() == 1 {
            return vec![format!("{name}.csv")];
        }
        self.tables
            .iter()
            .map(|t| {
                let label: String =
                    t.label.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' }).collect();
                format!("{name}-{label}.csv")
            })
            .collect()
    }

    /// Writes the CSV tables and `<experiment>.json` into `dir`, returning
    /// the paths written.
    pub fn emit(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for (table, name) in self.tables.iter().zip(self.csv_names()) {
            let path = dir.join(name);
            std::fs::write(&path, table.to_csv()?)?;
            written.push(path);
        }
        let path = dir.join(format!("{}.json", self.experiment.name()));
        std::fs::write(&path, self.to_json())?;
        written.push(path);
        Ok(written)
    }
}

/// Parses a JSON report and checks its internal consistency.
pub fn validate_report_json(text: &str) -> Result<CheckReport, CliError> {
    let report: CheckReport =
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("report does not match the schema: {e}")))?;
    if report.schema_version != REPORT_SCHEMA_VERSION {
        return Err(CliError::Config(format!("report schema_version {} is not supported", report.schema_version)));
    }
    let passes = report.records.iter().filter(|r| r.pass).count();
    if passes != report.summary.pass_count || report.records.len() - passes != report.summary.fail_count {
        return Err(CliError::Config("summary counts disagree with the records".into()));
    }
    if report.config_digest.len() != 64 || !report.config_digest.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(CliError::Config("config digest is not a SHA-256 hex string".into()));
    }
    Ok(report)
}

//! Sweep reports: an aligned table for the terminal, a CSV file and a JSONL
//! file carrying the exact values.
//!
//! The JSONL file opens with a header record holding the only
//! run-dependent fields (timestamp, duration); every later line depends on
//! the configuration alone.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::SweepConfig;
use super::CliError;
use crate::congruences::CongruenceVerdict;
use crate::rational::Valuation;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub holds: usize,
    /// Failures inside the hypotheses.
    pub fails: usize,
    pub probes: usize,
    /// Probes that fail, showing that an exclusion is needed.
    pub probe_failures: usize,
    pub domain_skips: usize,
    /// Smallest observed margin per id, over verdicts that are not probes.
    pub min_margin: BTreeMap<String, Valuation>,
}

impl Summary {
    pub fn tally(verdicts: &[CongruenceVerdict], domain_skips: usize) -> Self {
        let mut s = Summary { total: verdicts.len(), domain_skips, ..Summary::default() };
        for v in verdicts {
            match (v.holds, v.probe) {
                (true, _) => s.holds += 1,
                (false, false) => s.fails += 1,
                (false, true) => s.probe_failures += 1,
            }
            if v.probe {
                s.probes += 1;
            } else {
                s.min_margin
                    .entry(v.id.clone())
                    .and_modify(|m| *m = (*m).min(v.observed_margin))
                    .or_insert(v.observed_margin);
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub verdicts: Vec<CongruenceVerdict>,
    pub summary: Summary,
    /// `(id, reason)` for every skipped grid point.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skips: Vec<(String, String)>,
    #[serde(skip)]
    pub duration: Duration,
}

impl SweepReport {
    pub fn all_hold(&self) -> bool {
        self.summary.fails == 0
    }

    /// CSV with one row per verdict.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let internal = |e: csv::Error| CliError::Internal(e.to_string());
        w.write_record([
            "id",
            "branch",
            "params",
            "holds",
            "expect_congruent",
            "probe",
            "required_modulus_exponent",
            "observed_margin",
        ])
        .map_err(internal)?;
        for v in &self.verdicts {
            w.write_record([
                v.id.clone(),
                v.branch.clone().unwrap_or_default(),
                v.flat_params(),
                v.holds.to_string(),
                v.expect_congruent.to_string(),
                v.probe.to_string(),
                v.required_modulus_exponent.to_string(),
                v.observed_margin.to_string(),
            ])
            .map_err(internal)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
    }

    /// The deterministic body of the JSONL report: config, verdicts, summary.
    pub fn jsonl_body(&self) -> Result<String, CliError> {
        let ser = |v: serde_json::Value| serde_json::to_string(&v).map_err(|e| CliError::Internal(e.to_string()));
        let mut out = String::new();
        out += &ser(json!({"record": "config", "config": self.config}))?;
        out.push('\n');
        for v in &self.verdicts {
            let mut value = serde_json::to_value(v).map_err(|e| CliError::Internal(e.to_string()))?;
            value["record"] = json!("verdict");
            out += &ser(value)?;
            out.push('\n');
        }
        for (id, reason) in &self.skips {
            out += &ser(json!({"record": "skip", "id": id, "reason": reason}))?;
            out.push('\n');
        }
        out += &ser(json!({"record": "summary", "summary": self.summary}))?;
        out.push('\n');
        Ok(out)
    }

    pub fn jsonl_header(&self) -> String {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        json!({
            "record": "header",
            "generated_at_unix": now,
            "duration_ms": self.duration.as_millis() as u64,
            "version": env!("CARGO_PKG_VERSION"),
        })
        .to_string()
    }

    /// Writes `report.csv` and `report.jsonl` into `dir`, creating it if needed.
    pub fn write_to(&self, dir: &Path) -> Result<(), CliError> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |e: std::io::Error| CliError::Output { path: path.clone(), source: e }
        };
        std::fs::create_dir_all(dir).map_err(io(dir))?;
        let csv_path = dir.join("report.csv");
        std::fs::write(&csv_path, self.to_csv()?).map_err(io(&csv_path))?;
        let jsonl_path = dir.join("report.jsonl");
        let mut f = std::fs::File::create(&jsonl_path).map_err(io(&jsonl_path))?;
        writeln!(f, "{}", self.jsonl_header()).map_err(io(&jsonl_path))?;
        f.write_all(self.jsonl_body()?.as_bytes()).map_err(io(&jsonl_path))?;
        Ok(())
    }

    /// Aligned table, one row per verdict, followed by the summary.
    pub fn table(&self, rows: bool) -> String {
        let mut out = String::new();
        if rows && !self.verdicts.is_empty() {
            let cells: Vec<[String; 6]> = self
                .verdicts
                .iter()
                .map(|v| {
                    let status = match (v.holds, v.probe) {
                        (true, false) => "ok",
                        (false, false) => "FAIL",
                        (true, true) => "probe-ok",
                        (false, true) => "probe-fail",
                    };
                    [
                        v.id.clone(),
                        v.branch.clone().unwrap_or_else(|| "-".into()),
                        v.flat_params(),
                        status.into(),
                        format!("{}{}", if v.expect_congruent { "" } else { "≢ " }, v.required_modulus_exponent),
                        v.observed_margin.to_string(),
                    ]
                })
                .collect();
            let header = ["id", "branch", "params", "status", "required", "margin"].map(String::from);
            let mut widths = header.clone().map(|h| h.chars().count());
            for row in &cells {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.chars().count());
                }
            }
            for row in std::iter::once(&header).chain(&cells) {
                let line: Vec<String> = row
                    .iter()
                    .zip(widths)
                    .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                    .collect();
                let _ = writeln!(out, "{}", line.join("  ").trim_end());
            }
            out.push('\n');
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "total {}  holds {}  fails {}  probes {} ({} failing)  skipped {}",
            s.total, s.holds, s.fails, s.probes, s.probe_failures, s.domain_skips
        );
        for (id, m) in &s.min_margin {
            let _ = writeln!(out, "  min margin {id}: {m}");
        }
        out
    }
}

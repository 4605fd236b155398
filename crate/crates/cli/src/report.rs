//! Report model and deterministic serialization.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

/// One checked case; failures carry a replayable counterexample payload.
#[derive(Clone, Debug, Serialize)]
pub struct CaseRow {
    pub name: String,
    pub status: Verdict,
    pub details: Value,
}

impl CaseRow {
    pub fn pass(name: impl Into<String>, details: Value) -> CaseRow {
        CaseRow { name: name.into(), status: Verdict::Pass, details }
    }

    pub fn fail(name: impl Into<String>, details: Value) -> CaseRow {
        CaseRow { name: name.into(), status: Verdict::Fail, details }
    }

    pub fn skipped(name: impl Into<String>, reason: &str) -> CaseRow {
        CaseRow { name: name.into(), status: Verdict::Skipped, details: json!({ "reason": reason }) }
    }

    pub fn check(name: impl Into<String>, ok: bool, details: Value) -> CaseRow {
        if ok {
            CaseRow::pass(name, details)
        } else {
            CaseRow::fail(name, details)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub parameters: Value,
    pub cases: Vec<CaseRow>,
    pub verdict: Verdict,
    /// Wall clock; printed to stderr, never serialized, so identical
    /// configurations produce byte-identical report files.
    #[serde(skip)]
    pub wall_ms: u128,
}

impl Report {
    /// Aggregates case rows: any failure is FAIL, otherwise any skip is
    /// SKIPPED, otherwise PASS.
    pub fn from_cases(suite: &str, parameters: Value, cases: Vec<CaseRow>, wall_ms: u128) -> Report {
        let verdict = if cases.iter().any(|c| c.status == Verdict::Fail) {
            Verdict::Fail
        } else if cases.iter().any(|c| c.status == Verdict::Skipped) {
            Verdict::Skipped
        } else {
            Verdict::Pass
        };
        Report { suite: suite.into(), parameters, cases, verdict, wall_ms }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Serializes one report; stable for a fixed configuration.
pub fn render_report(report: &Report) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("reports serialize");
    out.push('\n');
    out
}

/// Writes `report_<suite>.json` files plus a `summary.json`.
pub fn write_reports(dir: &Path, reports: &[Report]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for report in reports {
        fs::write(dir.join(format!("report_{}.json", report.suite)), render_report(report))?;
    }
    let summary: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "suite": r.suite,
                "verdict": r.verdict,
                "cases": r.cases.len(),
                "failures": r.cases.iter().filter(|c| c.status == Verdict::Fail).count(),
            })
        })
        .collect();
    let mut file = fs::File::create(dir.join("summary.json"))?;
    writeln!(file, "{}", serde_json::to_string_pretty(&summary).expect("summary serializes"))?;
    Ok(())
}

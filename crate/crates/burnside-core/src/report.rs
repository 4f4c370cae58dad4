//! Verification reports: per-check records, summaries and serialization.

use serde::Serialize;
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    PaperDiscrepancy,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::PaperDiscrepancy => "paper-discrepancy",
            Status::Fail => "fail",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// Which statement the check exercises, or "plumbing".
    pub paper_anchor: String,
    pub status: Status,
    pub expected: String,
    pub computed: String,
    /// Wall-clock time; kept out of JSON and CSV so reports are byte-stable.
    #[serde(skip)]
    pub runtime_ms: u128,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, status: Status, expected: impl ToString, computed: impl ToString) -> Self {
        CheckRecord {
            name: name.into(),
            paper_anchor: anchor.into(),
            status,
            expected: expected.to_string(),
            computed: computed.to_string(),
            runtime_ms: 0,
        }
    }

    /// Runs `f`, timing it; an error becomes a failing record.
    pub fn run(
        name: impl Into<String>,
        anchor: impl Into<String>,
        f: impl FnOnce() -> Result<(Status, String, String)>,
    ) -> Self {
        let t = std::time::Instant::now();
        let (status, expected, computed) = match f() {
            Ok(v) => v,
            Err(e) => (Status::Fail, "no error".into(), format!("error: {e}")),
        };
        let mut r = CheckRecord::new(name, anchor, status, expected, computed);
        r.runtime_ms = t.elapsed().as_millis();
        r
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub paper_discrepancy: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    /// Sorts records by name so output is independent of evaluation order.
    pub fn new(suite: impl Into<String>, seed: u64, mut records: Vec<CheckRecord>) -> Self {
        records.sort_by(|a, b| a.name.cmp(&b.name));
        let mut summary = Summary {
            total: records.len(),
            ..Summary::default()
        };
        for r in &records {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::PaperDiscrepancy => summary.paper_discrepancy += 1,
            }
        }
        VerificationReport {
            suite: suite.into(),
            seed,
            records,
            summary,
        }
    }

    pub fn worst(&self) -> Status {
        self.records.iter().map(|r| r.status).max().unwrap_or(Status::Pass)
    }

    /// 0 unless some record failed; discrepancies do not fail.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.summary.fail > 0)
    }

    pub fn record(&self, name: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    /// JSON with keys in sorted order.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
        s.push('\n');
        s
    }

    /// One row per record.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["suite", "seed", "name", "paper_anchor", "status", "expected", "computed"])
            .map_err(|e| Error::InvalidSpec(e.to_string()))?;
        for r in &self.records {
            w.write_record([
                self.suite.as_str(),
                &self.seed.to_string(),
                &r.name,
                &r.paper_anchor,
                r.status.as_str(),
                &r.expected,
                &r.computed,
            ])
            .map_err(|e| Error::InvalidSpec(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidSpec(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "suite {} (seed {})", self.suite, self.seed);
        for r in &self.records {
            let _ = writeln!(s, "{:<17} {}  [{}]", r.status.as_str(), r.name, r.paper_anchor);
            if r.status != Status::Pass {
                let _ = writeln!(s, "    expected: {}", r.expected);
                let _ = writeln!(s, "    computed: {}", r.computed);
            }
        }
        let m = &self.summary;
        let _ = writeln!(
            s,
            "{} checks: {} pass, {} fail, {} paper-discrepancy",
            m.total, m.pass, m.fail, m.paper_discrepancy
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        VerificationReport::new(
            "demo",
            7,
            vec![
                CheckRecord::new("b", "plumbing", Status::Pass, 1, 1),
                CheckRecord::new("a", "plumbing", Status::PaperDiscrepancy, 4, 2),
            ],
        )
    }

    #[test]
    fn sorted_and_summarized() {
        let r = sample();
        assert_eq!(r.records[0].name, "a");
        assert_eq!(r.summary.paper_discrepancy, 1);
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.worst(), Status::PaperDiscrepancy);
    }

    #[test]
    fn csv_rows_match_records() {
        let r = sample();
        let csv = r.to_csv().unwrap();
        assert_eq!(csv.lines().count(), r.records.len() + 1);
        assert!(r.to_json().contains("\"paper-discrepancy\""));
        assert!(!r.to_json().contains("runtime_ms"));
    }
}

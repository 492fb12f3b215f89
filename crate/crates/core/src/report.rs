//! Verification reports.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::scalar::BackendKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    /// Raw equality verdicts behind the status, in evaluation order.
    #[serde(skip)]
    pub verdicts: Vec<bool>,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Self { id: id.into(), status, detail: detail.into(), witness: None, verdicts: Vec::new() }
    }

    /// Passes iff every verdict holds.
    pub fn from_verdicts(id: impl Into<String>, detail: impl Into<String>, verdicts: Vec<bool>) -> Self {
        let held = verdicts.iter().filter(|&&v| v).count();
        let status = if held == verdicts.len() { Status::Pass } else { Status::Fail };
        let detail = format!("{} ({held}/{} hold)", detail.into(), verdicts.len());
        Self { id: id.into(), status, detail, witness: None, verdicts }
    }

    /// Like [`CheckRecord::from_verdicts`], but an evaluation error fails the check.
    pub fn evaluate(id: impl Into<String>, detail: impl Into<String>, run: impl FnOnce(&mut Vec<bool>) -> Result<()>) -> Self {
        let mut verdicts = Vec::new();
        match run(&mut verdicts) {
            Ok(()) => Self::from_verdicts(id, detail, verdicts),
            Err(e) => {
                let mut rec = Self::new(id, Status::Fail, format!("{}: error: {e}", detail.into()));
                rec.verdicts = verdicts;
                rec
            }
        }
    }

    /// A recorded observation whose expected outcome is that the relations
    /// do NOT all hold. Passes iff the observation matches the expectation.
    pub fn finding(id: impl Into<String>, detail: impl Into<String>, expect_all_hold: bool, verdicts: Vec<bool>) -> Self {
        let all = verdicts.iter().all(|&v| v);
        let held = verdicts.iter().filter(|&&v| v).count();
        let status = if all == expect_all_hold { Status::Pass } else { Status::Fail };
        let detail = format!(
            "{} ({held}/{} hold; expected {})",
            detail.into(),
            verdicts.len(),
            if expect_all_hold { "all to hold" } else { "at least one to fail" }
        );
        Self { id: id.into(), status, detail, witness: None, verdicts }
    }

    pub fn with_witness(mut self, witness: serde_json::Value) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub n: usize,
    pub backend: BackendKind,
    pub checks: Vec<CheckRecord>,
    pub elapsed_ms: u64,
}

impl CheckReport {
    /// Sorts checks by id. Panics on duplicate ids.
    pub fn new(suite: impl Into<String>, n: usize, backend: BackendKind, checks: Vec<CheckRecord>, elapsed_ms: u64) -> Self {
        let mut by_id = BTreeMap::new();
        for c in checks {
            let id = c.id.clone();
            assert!(by_id.insert(id.clone(), c).is_none(), "duplicate check id {id}");
        }
        Self { suite: suite.into(), n, backend, checks: by_id.into_values().collect(), elapsed_ms }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialization is infallible")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    /// One line per check, then an overall line.
    pub fn to_text(&self) -> String {
        let mut out = format!("suite {} (n = {}, backend {})\n", self.suite, self.n, self.backend);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            out.push_str(&format!("  [{tag}] {}: {}\n", c.id, c.detail));
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "{}: {} checks, {} failed\n",
            if failed == 0 { "PASS" } else { "FAIL" },
            self.checks.len(),
            failed
        ));
        out
    }
}

//! Verification reports. Field names are a stable interface: scripts read
//! the JSON rendering directly.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub reference: String,
    pub samples: u64,
    pub failures: u64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

impl Check {
    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Running count of samples and failures for one check. Keeps the first
/// failing witness.
#[derive(Debug, Clone)]
pub struct Tally {
    id: String,
    reference: String,
    samples: u64,
    failures: u64,
    witness: Option<String>,
}

impl Tally {
    pub fn new(id: &str, reference: &str) -> Self {
        Tally {
            id: id.to_owned(),
            reference: reference.to_owned(),
            samples: 0,
            failures: 0,
            witness: None,
        }
    }

    /// Records one sample; the witness closure only runs on failure.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.samples += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn finish(self) -> Check {
        Check {
            status: if self.failures == 0 {
                Status::Pass
            } else {
                Status::Fail
            },
            id: self.id,
            reference: self.reference,
            samples: self.samples,
            failures: self.failures,
            witness: self.witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub tolerance: f64,
}

impl VerdictReport {
    /// Builds a report with checks sorted by id, so the rendering does not
    /// depend on the order in which checks completed.
    pub fn new(suite: &str, seed: u64, tolerance: f64, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        VerdictReport {
            suite: suite.to_owned(),
            seed,
            checks,
            tolerance,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::is_pass)
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> u64 {
        self.checks.iter().map(|c| c.failures).sum()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(2).max(5);
        let mut out = String::new();
        let tolerance = if self.tolerance == 0.0 {
            "exact".to_string()
        } else {
            format!("{:e}", self.tolerance)
        };
        let _ = writeln!(out, "suite: {}  seed: {}  tolerance: {tolerance}", self.suite, self.seed);
        let _ = writeln!(
            out,
            "{:<width$}  {:>8}  {:>8}  {:<6}  ref",
            "check", "samples", "failures", "status"
        );
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
            };
            let _ = writeln!(
                out,
                "{:<width$}  {:>8}  {:>8}  {:<6}  {}",
                c.id, c.samples, c.failures, status, c.reference
            );
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "{:<width$}    witness: {w}", "");
            }
        }
        let passed = self.checks.iter().filter(|c| c.is_pass()).count();
        let _ = writeln!(out, "{passed}/{} checks passed", self.checks.len());
        out
    }
}

//! Empirical verification of the representation results: compliant and
//! deliberately non-compliant contraction operators assembled from
//! enumerated posteriors, the worked contraction trace, and the acceptance and
//! α-equivalence propositions.
//!
//! Every `verify_*` function returns a [`LabReport`] with one [`Check`] per
//! assertion. A failing check is reported, never silently dropped.

mod candidates;
mod checks;
mod theorem;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::change::ChangeError;
use crate::logic::LogicError;
use crate::postulates::PostulateError;
use crate::states::StateError;

pub use crate::states::ordered_partition_count as fubini_number;
pub use candidates::{
    posterior_candidates, posterior_candidates_models, CrConstraint, TableChoice, TableOperator,
    CANDIDATE_WORLD_LIMIT,
};
pub use checks::{
    reproduce_table1, verify_acceptance, verify_alpha_equivalence, verify_base,
    verify_cn_formulation, verify_contractional_correspondence, verify_enumeration,
    verify_invariance, verify_iteration, SCOPE_NOTE,
};
pub use theorem::{verify_theorem1, Theorem1Budget};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Postulate(#[from] PostulateError),
    #[error(transparent)]
    Change(#[from] ChangeError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    State(#[from] StateError),
}

fn millis<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

/// One assertion of a verification run.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub instances: u64,
    pub detail: String,
    #[serde(rename = "elapsed_ms", serialize_with = "millis")]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct LabReport {
    pub title: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    #[serde(rename = "elapsed_ms", serialize_with = "millis")]
    pub elapsed: Duration,
}

impl LabReport {
    pub(crate) fn new(title: impl Into<String>) -> Self {
        LabReport {
            title: title.into(),
            checks: Vec::new(),
            notes: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    /// Runs `f`, timing it, and records its outcome as a check.
    pub(crate) fn run(
        &mut self,
        name: impl Into<String>,
        f: impl FnOnce() -> Result<(bool, u64, String), LabError>,
    ) -> Result<(), LabError> {
        let start = Instant::now();
        let (passed, instances, detail) = f()?;
        let elapsed = start.elapsed();
        self.elapsed += elapsed;
        self.checks.push(Check {
            name: name.into(),
            passed,
            instances,
            detail,
            elapsed,
        });
        Ok(())
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Appends the checks and notes of `other`.
    pub fn absorb(&mut self, other: LabReport) {
        self.checks.extend(other.checks);
        for note in other.notes {
            if !self.notes.contains(&note) {
                self.notes.push(note);
            }
        }
        self.elapsed += other.elapsed;
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.title);
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{}  {}  [{} instances, {:.1} ms]",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.instances,
                c.elapsed.as_secs_f64() * 1e3
            );
            if !c.detail.is_empty() {
                for line in c.detail.lines() {
                    let _ = writeln!(out, "      {line}");
                }
            }
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(
            out,
            "{passed}/{} checks passed in {:.1} ms",
            self.checks.len(),
            self.elapsed.as_secs_f64() * 1e3
        );
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

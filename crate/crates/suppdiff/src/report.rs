//! Serializable verdicts shared by the sampled checkers.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Witnesses kept per report; the count of all violations is still reported.
pub const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HoldsOnSample,
    Violated,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::HoldsOnSample
    }
}

/// Three-valued answer for questions that may exhaust numerical resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tri {
    True,
    False,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub points: Vec<Vec<f64>>,
    pub lambda: Option<f64>,
}

impl Witness {
    pub fn new(points: Vec<Vec<f64>>, lambda: Option<f64>) -> Self {
        Self { points, lambda }
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        let a = self.points.iter().flatten().chain(self.lambda.iter());
        let b = other.points.iter().flatten().chain(other.lambda.iter());
        for (x, y) in a.zip(b) {
            match x.total_cmp(y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.points.len().cmp(&other.points.len())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition_id: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub sample_count: usize,
    pub seed: u64,
}

impl ConditionReport {
    /// Builds a report; any witness means a violation. Witnesses are sorted
    /// canonically and truncated to [`MAX_WITNESSES`].
    pub fn from_witnesses(id: impl Into<String>, mut witnesses: Vec<Witness>, sample_count: usize, seed: u64) -> Self {
        witnesses.sort_by(|a, b| a.canonical_cmp(b));
        witnesses.dedup();
        witnesses.truncate(MAX_WITNESSES);
        let verdict = if witnesses.is_empty() { Verdict::HoldsOnSample } else { Verdict::Violated };
        Self { condition_id: id.into(), verdict, witnesses, sample_count, seed }
    }

    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}

/// Outcome of a theorem suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteStatus {
    Pass,
    /// A precondition failed on the sample, so the implication was not tested.
    Skipped,
    /// A replayable counterexample to an implication.
    Alarm,
    /// Numerical resolution was exhausted somewhere.
    Indeterminate,
}

impl SuiteStatus {
    /// Process exit code for this status.
    pub fn exit_code(self) -> i32 {
        match self {
            SuiteStatus::Pass | SuiteStatus::Skipped => 0,
            SuiteStatus::Alarm => 2,
            SuiteStatus::Indeterminate => 3,
        }
    }

    /// The more severe of two statuses (alarm over indeterminate over the rest).
    pub fn worst(self, other: SuiteStatus) -> SuiteStatus {
        let rank = |s: SuiteStatus| match s {
            SuiteStatus::Pass => 0,
            SuiteStatus::Skipped => 1,
            SuiteStatus::Indeterminate => 2,
            SuiteStatus::Alarm => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

/// A counterexample to an implication, with a command that reproduces it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alarm {
    pub id: String,
    pub message: String,
    pub witness: Option<Witness>,
    pub replay: String,
}

/// Summary of a differentiability scan over a dual grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub points: usize,
    pub differentiable: usize,
    pub non_differentiable: usize,
    pub indeterminate: usize,
    #[serde(with = "crate::support::ext_real")]
    pub max_diameter: f64,
    /// Up to [`MAX_WITNESSES`] grid points where the argmax is not a singleton.
    pub kinks: Vec<Vec<f64>>,
}

impl GridSummary {
    pub fn from_rows(rows: &[crate::support::ScanRow]) -> Self {
        let count = |t: Tri| rows.iter().filter(|r| r.verdict == t).count();
        Self {
            points: rows.len(),
            differentiable: count(Tri::True),
            non_differentiable: count(Tri::False),
            indeterminate: count(Tri::Indeterminate),
            max_diameter: rows.iter().map(|r| r.diameter).fold(0.0, f64::max),
            kinks: rows.iter().filter(|r| r.verdict == Tri::False).take(MAX_WITNESSES).map(|r| r.xstar.clone()).collect(),
        }
    }

    pub fn all_differentiable(&self) -> bool {
        self.differentiable == self.points
    }
}

/// Report of a theorem suite run on one set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub suite: String,
    pub set: String,
    pub status: SuiteStatus,
    pub notes: Vec<String>,
    pub conditions: Vec<ConditionReport>,
    pub grid: Option<GridSummary>,
    pub alarms: Vec<Alarm>,
}

impl TheoremReport {
    pub fn new(suite: impl Into<String>, set: impl Into<String>) -> Self {
        Self { suite: suite.into(), set: set.into(), status: SuiteStatus::Pass, notes: Vec::new(), conditions: Vec::new(), grid: None, alarms: Vec::new() }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn alarm(&mut self, a: Alarm) {
        self.status = self.status.worst(SuiteStatus::Alarm);
        self.alarms.push(a);
    }

    pub fn mark(&mut self, s: SuiteStatus) {
        self.status = self.status.worst(s);
    }

    pub fn condition(&self, id: &str) -> Option<&ConditionReport> {
        self.conditions.iter().find(|c| c.condition_id == id)
    }
}

/// Quotes a CLI argument for a POSIX shell when needed.
pub fn shell_quote(s: &str) -> String {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "-_.,/:=+".contains(c)) {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\'', "'\\''"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witnesses_are_sorted_and_capped() {
        let ws: Vec<Witness> = (0..20).rev().map(|i| Witness::new(vec![vec![i as f64, 0.0]], Some(0.5))).collect();
        let r = ConditionReport::from_witnesses("r-sas", ws, 20, 7);
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(r.witnesses.len(), MAX_WITNESSES);
        assert_eq!(r.witnesses[0].points[0][0], 0.0);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.starts_with(r#"{"condition_id":"r-sas","verdict":"violated","witnesses":[{"points":[[0.0,0.0]],"lambda":0.5}"#));
    }

    #[test]
    fn quoting() {
        assert_eq!(shell_quote("d4"), "d4");
        assert_eq!(shell_quote(r#"{"production":"zero"}"#), r#"'{"production":"zero"}'"#);
        assert_eq!(shell_quote("it's"), r"'it'\''s'");
    }

    #[test]
    fn statuses_order() {
        assert_eq!(SuiteStatus::Pass.worst(SuiteStatus::Alarm), SuiteStatus::Alarm);
        assert_eq!(SuiteStatus::Alarm.worst(SuiteStatus::Indeterminate), SuiteStatus::Alarm);
        assert_eq!(SuiteStatus::Indeterminate.exit_code(), 3);
    }

    #[test]
    fn empty_means_holds() {
        let r = ConditionReport::from_witnesses("fp-ssc", vec![], 10, 1);
        assert!(r.holds());
    }
}

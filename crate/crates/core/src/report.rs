//! Residual records and the JSON report format.

use serde::Serialize;
use std::collections::BTreeMap;

/// One certified identity: `pass` iff `residual ≤ tolerance`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub check: String,
    pub anchor: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Why a construction was refused.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(check: impl Into<String>, anchor: &str, residual: f64, tolerance: f64) -> Check {
        // NaN never passes
        let pass = residual <= tolerance;
        Check {
            check: check.into(),
            anchor: anchor.to_string(),
            residual: sanitize(residual),
            tolerance,
            pass,
            note: None,
        }
    }

    /// A check whose residual must be at least `floor`, used for scenarios
    /// that are required to fail. `pass` records whether the failure showed.
    pub fn detects(check: impl Into<String>, anchor: &str, residual: f64, floor: f64) -> Check {
        Check {
            check: check.into(),
            anchor: anchor.to_string(),
            residual: sanitize(residual),
            tolerance: floor,
            pass: residual >= floor,
            note: None,
        }
    }

    /// Integer or boolean facts, encoded with residual zero when they hold.
    pub fn fact(check: impl Into<String>, anchor: &str, holds: bool) -> Check {
        Check::new(check, anchor, if holds { 0.0 } else { 1.0 }, 0.0)
    }
}

fn sanitize(x: f64) -> f64 {
    if x.is_finite() {
        x
    } else {
        f64::MAX
    }
}

/// A list of checks with a derived overall verdict.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }

    pub fn prefixed(mut self, prefix: &str) -> ValidationReport {
        for c in &mut self.checks {
            c.check = format!("{prefix}/{}", c.check);
        }
        self
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check == id)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Environment {
    pub tolerance: f64,
    pub horizon: usize,
    pub epsilons: Vec<f64>,
    pub input: String,
}

/// Deterministic part of a report.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ReportBody {
    pub suite: String,
    pub environment: Environment,
    pub records: Vec<Check>,
    /// Dimensions, defects and estimates computed along the way.
    pub values: BTreeMap<String, f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub body: ReportBody,
    pub timing_ms: f64,
}

impl Report {
    pub fn new(
        suite: &str,
        environment: Environment,
        mut records: Vec<Check>,
        values: BTreeMap<String, f64>,
        timing_ms: f64,
    ) -> Report {
        records.sort_by(|a, b| a.check.cmp(&b.check));
        let pass = records.iter().all(|r| r.pass);
        Report {
            body: ReportBody {
                suite: suite.to_string(),
                environment,
                records,
                values,
                pass,
            },
            timing_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn body_json(&self) -> String {
        serde_json::to_string_pretty(&self.body).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_residual_fails() {
        let c = Check::new("x", "a", f64::NAN, 1.0);
        assert!(!c.pass);
        assert!(c.residual.is_finite());
    }

    #[test]
    fn records_are_sorted() {
        let env = Environment {
            tolerance: 1e-9,
            horizon: 1,
            epsilons: vec![0.1],
            input: "x".into(),
        };
        let r = Report::new(
            "s",
            env,
            vec![Check::new("b", "a", 0.0, 1.0), Check::new("a", "a", 2.0, 1.0)],
            BTreeMap::new(),
            1.0,
        );
        assert_eq!(r.body.records[0].check, "a");
        assert!(!r.body.pass);
    }
}

//! Pass/fail records shared by every verification routine.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Relative slack for inequality checks between computed quantities.
pub const DEFAULT_RTOL: f64 = 1e-6;
/// Absolute slack for inequality checks between computed quantities.
pub const DEFAULT_ATOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A roster entry did not meet the preconditions of the property.
    Skipped,
    /// Reported quantity with no pass/fail meaning.
    Data,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rtol: DEFAULT_RTOL,
            atol: DEFAULT_ATOL,
        }
    }
}

impl Tolerance {
    /// `lhs ≤ rhs + rtol |rhs| + atol`.
    pub fn holds(&self, lhs: f64, rhs: f64) -> bool {
        lhs <= rhs + self.rtol * rhs.abs() + self.atol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The property the check instantiates, e.g. "triangle inequality".
    pub property: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub status: Status,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerance>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constants: BTreeMap<String, f64>,
}

impl Check {
    fn base(name: impl Into<String>, property: impl Into<String>, status: Status) -> Self {
        Check {
            name: name.into(),
            property: property.into(),
            lhs: None,
            rhs: None,
            status,
            pass: status == Status::Pass,
            detail: String::new(),
            tolerances: None,
            constants: BTreeMap::new(),
        }
    }

    /// Records `lhs` and `rhs` with an externally decided verdict.
    pub fn compare(name: impl Into<String>, property: impl Into<String>, lhs: f64, rhs: f64, pass: bool) -> Self {
        let mut c = Check::base(name, property, if pass { Status::Pass } else { Status::Fail });
        c.lhs = Some(lhs);
        c.rhs = Some(rhs);
        c
    }

    /// `lhs ≤ rhs` under `tol`.
    pub fn inequality(
        name: impl Into<String>,
        property: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tol: Tolerance,
    ) -> Self {
        let pass =
            lhs.is_finite() && rhs.is_finite() && tol.holds(lhs, rhs) || (lhs.is_finite() && rhs == f64::INFINITY);
        let mut c = Check::compare(name, property, lhs, rhs, pass);
        c.tolerances = Some(tol);
        c
    }

    /// Pass/fail on a boolean condition with no numeric sides.
    pub fn condition(name: impl Into<String>, property: impl Into<String>, holds: bool) -> Self {
        Check::base(name, property, if holds { Status::Pass } else { Status::Fail })
    }

    pub fn skipped(name: impl Into<String>, property: impl Into<String>, reason: impl Into<String>) -> Self {
        let mut c = Check::base(name, property, Status::Skipped);
        c.detail = reason.into();
        c
    }

    pub fn data(name: impl Into<String>, property: impl Into<String>) -> Self {
        Check::base(name, property, Status::Data)
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn with_constant(mut self, key: impl Into<String>, value: f64) -> Self {
        self.constants.insert(key.into(), value);
        self
    }

    pub fn with_sides(mut self, lhs: f64, rhs: f64) -> Self {
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub data: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport {
            suite: suite.into(),
            checks: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.summary.total += 1;
        match check.status {
            Status::Pass => self.summary.passed += 1,
            Status::Fail => self.summary.failed += 1,
            Status::Skipped => self.summary.skipped += 1,
            Status::Data => self.summary.data += 1,
        }
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        for c in other.checks {
            self.push(c);
        }
    }

    /// Sorts checks by name so output order does not depend on execution order.
    pub fn sorted(mut self) -> Self {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self
    }

    /// No check failed. Skipped and data entries do not count against a report.
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only serializable data")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        let _ = writeln!(out, "suite: {}", self.suite);
        let _ = writeln!(
            out,
            "{:<width$}  {:<7}  {:>14}  {:>14}  detail",
            "check", "status", "lhs", "rhs"
        );
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skipped",
                Status::Data => "data",
            };
            let _ = writeln!(
                out,
                "{:<width$}  {:<7}  {:>14}  {:>14}  {}",
                c.name,
                status,
                fmt_opt(c.lhs),
                fmt_opt(c.rhs),
                c.detail
            );
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "total {}  passed {}  failed {}  skipped {}  data {}",
            s.total, s.passed, s.failed, s.skipped, s.data
        );
        out
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.8e}"),
        None => "-".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_policy() {
        let t = Tolerance::default();
        assert!(t.holds(1.0 + 5e-7, 1.0));
        assert!(!t.holds(1.0 + 5e-6, 1.0));
        assert!(t.holds(5e-10, 0.0));
    }

    #[test]
    fn summary_matches_checks() {
        let mut r = VerificationReport::new("x");
        r.push(Check::inequality("b", "p", 1.0, 2.0, Tolerance::default()));
        r.push(Check::inequality("a", "p", 3.0, 2.0, Tolerance::default()));
        r.push(Check::skipped("c", "p", "why"));
        r.push(Check::data("d", "p"));
        let r = r.sorted();
        assert_eq!(r.checks[0].name, "a");
        assert_eq!(r.summary.total, 4);
        assert_eq!(r.summary.passed, 1);
        assert_eq!(r.summary.failed, 1);
        assert!(!r.all_passed());
        assert!(r.to_table().contains("FAIL"));
    }

    #[test]
    fn non_finite_sides_fail() {
        let c = Check::inequality("x", "p", f64::NAN, 1.0, Tolerance::default());
        assert!(c.failed());
        let c = Check::inequality("x", "p", f64::INFINITY, f64::INFINITY, Tolerance::default());
        assert!(c.failed());
    }
}

//! Named pass/fail suites shared by the verification entry points.

use std::fmt;

/// Outcome of one named identity suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// First counterexample, if any.
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn new(name: &str, failure: Option<String>) -> Self {
        CheckResult { name: name.to_string(), passed: failure.is_none(), detail: failure }
    }
}

/// A list of suites; `first_failure` names the first violated identity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn push(&mut self, name: &str, failure: Option<String>) {
        self.checks.push(CheckResult::new(name, failure));
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.detail {
                None => writeln!(f, "ok    {}", c.name)?,
                Some(d) => writeln!(f, "FAIL  {}: {}", c.name, d)?,
            }
        }
        Ok(())
    }
}

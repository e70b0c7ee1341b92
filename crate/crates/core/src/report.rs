//! Structured pass/fail records shared by all verification suites.

use std::fmt;
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct Check {
    pub suite: String,
    pub key: String,
    pub passed: bool,
    /// Exact residual, numeric metric, or a short note.
    pub detail: String,
    pub millis: u128,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, suite: &str, key: &str, passed: bool, detail: String, millis: u128) {
        self.checks.push(Check {
            suite: suite.to_string(),
            key: key.to_string(),
            passed,
            detail,
            millis,
        });
    }

    /// Record a check, timing the closure and treating `Ok(None)` as a pass
    /// and `Ok(Some(msg))` as a failure with that message.
    pub fn check<F>(&mut self, suite: &str, key: &str, f: F)
    where
        F: FnOnce() -> Result<Option<String>, Box<dyn std::error::Error>>,
    {
        let start = Instant::now();
        let (passed, detail) = match f() {
            Ok(None) => (true, "ok".to_string()),
            Ok(Some(msg)) => (false, msg),
            Err(e) => (false, format!("error: {e}")),
        };
        self.push(suite, key, passed, detail, start.elapsed().as_millis());
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn counts(&self) -> (usize, usize) {
        let passed = self.checks.iter().filter(|c| c.passed).count();
        (passed, self.checks.len())
    }

    /// Deterministic ordering for emission: suite, then key.
    pub fn sorted(mut self) -> Report {
        self.checks.sort_by(|a, b| (&a.suite, &a.key).cmp(&(&b.suite, &b.key)));
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "pass" } else { "FAIL" };
        write!(f, "[{status}] {}/{}: {}", self.suite, self.key, self.detail)
    }
}

/// Build a failure message out of a nonzero exact residual.
pub fn residual_failure(what: &str, residual: &dyn fmt::Display) -> Option<String> {
    Some(format!("{what}: residual = {residual}"))
}

//! Check records and the JSON verification report.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Certification;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "skipped-budget")]
    SkippedBudget,
}

/// One named assertion with its outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    /// `exact` or `modular`.
    pub certification: String,
    /// Primes that agreed, for modular results.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub primes: Vec<u64>,
    pub millis: u64,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        expected: impl ToString,
        actual: impl ToString,
        passed: bool,
    ) -> Self {
        Self {
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            expected: expected.to_string(),
            actual: actual.to_string(),
            certification: "exact".into(),
            primes: Vec::new(),
            millis: 0,
        }
    }

    /// A check whose expected and actual values are compared for equality.
    pub fn eq<T: PartialEq + ToString>(name: impl Into<String>, expected: T, actual: T) -> Self {
        let passed = expected == actual;
        Self::new(name, expected, actual, passed)
    }

    pub fn skipped(name: impl Into<String>, reason: impl ToString) -> Self {
        Self {
            status: Status::SkippedBudget,
            ..Self::new(name, "-", reason, true)
        }
    }

    pub fn with_certification(mut self, c: &Certification) -> Self {
        self.certification = c.label().into();
        self.primes = c.primes().to_vec();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Turns an error into a failed check, or a skipped one for budget errors.
    pub fn from_error(name: impl Into<String>, e: &Error) -> Self {
        if e.is_budget() {
            Self::skipped(name, e)
        } else {
            Self::new(name, "no error", e, false)
        }
    }
}

/// Runs `f`, records its wall time on each produced check that has none yet, and
/// converts errors.
pub fn timed(name: &str, f: impl FnOnce() -> Result<Vec<Check>>) -> Vec<Check> {
    let start = Instant::now();
    let mut checks = match f() {
        Ok(c) => c,
        Err(e) => vec![Check::from_error(name, &e)],
    };
    let ms = start.elapsed().as_millis() as u64;
    for c in checks.iter_mut().filter(|c| c.millis == 0) {
        c.millis = ms;
    }
    checks
}

/// Tally of outcomes over a list of checks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(checks: &[Check]) -> Self {
        let count = |s| checks.iter().filter(|c| c.status == s).count();
        Self {
            total: checks.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            skipped: count(Status::SkippedBudget),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report<C> {
    pub schema_version: String,
    pub config: C,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl<C> Report<C> {
    pub fn new(config: C, checks: Vec<Check>) -> Self {
        let summary = Summary::of(&checks);
        Self {
            schema_version: SCHEMA_VERSION.into(),
            config,
            checks,
            summary,
        }
    }

    /// Same report with all timing fields zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self
    where
        C: Clone,
    {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.millis = 0;
        }
        r
    }
}

use std::fmt;

use serde::{Deserialize, Serialize};

/// One assertion inside a [`Report`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of a verifier: the certified window, the seed, and every check made.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub window: String,
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>, window: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            window: window.into(),
            seed: None,
            checks: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn check(&mut self, label: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            label: label.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// Appends the checks of `other`, prefixing their labels.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for c in other.checks {
            self.checks.push(Check {
                label: format!("{prefix}: {}", c.label),
                ..c
            });
        }
    }

    /// True if there is at least one check and all of them passed.
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn passed_count(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "{verdict}: {} ({}/{} exact)", self.title, self.passed_count(), self.checks.len())?;
        writeln!(f, "  window: {}", self.window)?;
        if let Some(seed) = self.seed {
            writeln!(f, "  seed: {seed}")?;
        }
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "  [{mark}] {}", c.label)?;
            } else {
                writeln!(f, "  [{mark}] {}: {}", c.label, c.detail)?;
            }
        }
        Ok(())
    }
}

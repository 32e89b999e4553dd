//! Deterministic check reports shared by every law checker.
//!
//! A report is a flat list of violations in canonical order (the order in
//! which the checker's nested index loops visit tuples). Malformed tables
//! (dangling identifiers, wrong lengths) are surfaced as hard errors before
//! any law is evaluated, never as report entries.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A single violated law instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Stable machine-readable law name, e.g. `"associativity"`, `"pentagon"`.
    pub law: String,
    /// Canonical description of the offending tuple.
    pub at: String,
    /// Human-readable mismatch details.
    pub detail: String,
}

/// Outcome of a law check: empty means every checked instance holds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    /// What was checked (entity kind plus quantification domain).
    pub context: String,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn new(context: impl Into<String>) -> Self {
        CheckReport {
            context: context.into(),
            violations: Vec::new(),
        }
    }

    pub fn push(&mut self, law: &str, at: impl Into<String>, detail: impl Into<String>) {
        self.violations.push(Violation {
            law: law.to_string(),
            at: at.into(),
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Absorb another report, keeping canonical order.
    pub fn merge(&mut self, other: CheckReport) {
        self.violations.extend(other.violations);
    }

    /// First violation of the given law, if any.
    pub fn first_of(&self, law: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.law == law)
    }

    pub fn laws_violated(&self) -> Vec<&str> {
        let mut laws: Vec<&str> = self.violations.iter().map(|v| v.law.as_str()).collect();
        laws.dedup();
        laws
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            writeln!(f, "ok: {}", self.context)?;
        } else {
            writeln!(
                f,
                "FAIL: {} ({} violation(s))",
                self.context,
                self.violations.len()
            )?;
            for v in &self.violations {
                writeln!(f, "  [{}] at {}: {}", v.law, v.at, v.detail)?;
            }
        }
        Ok(())
    }
}

/// Hard structural errors: the input tables do not even describe data of the
/// right shape, so no law can be evaluated.
#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum TableError {
    #[error("malformed table in {context}: {detail}")]
    MalformedTable { context: String, detail: String },
}

impl TableError {
    pub fn new(context: impl Into<String>, detail: impl Into<String>) -> Self {
        TableError::MalformedTable {
            context: context.into(),
            detail: detail.into(),
        }
    }
}

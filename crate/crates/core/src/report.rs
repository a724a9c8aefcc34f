use std::fmt;

use serde::Serialize;

/// A single failed law together with the indices that witness the failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: String,
    pub witness: Vec<usize>,
}

/// Outcome of an exhaustive law check. Empty means every law held.
///
/// Only the first witness found for each law is kept.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, law: &str) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }

    pub fn witness(&self, law: &str) -> Option<&[usize]> {
        self.violations
            .iter()
            .find(|v| v.law == law)
            .map(|v| v.witness.as_slice())
    }

    /// Records `law` as violated unless a witness for it is already present.
    pub fn fail(&mut self, law: &str, witness: Vec<usize>) {
        if !self.has(law) {
            self.violations.push(Violation { law: law.to_string(), witness });
        }
    }

    pub fn extend_prefixed(&mut self, prefix: &str, other: Report) {
        for v in other.violations {
            self.fail(&format!("{prefix}{}", v.law), v.witness);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{} at {:?}", v.law, v.witness))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

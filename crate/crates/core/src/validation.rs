use std::fmt;

use serde::{Deserialize, Serialize};

/// One named identity and how badly it fails.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub passed: bool,
}

/// Residuals of a family of identities, accepted iff every check passes.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub tolerance: f64,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new(tolerance: f64) -> Self {
        Self {
            tolerance,
            checks: Vec::new(),
        }
    }

    /// Record a residual; it passes when it is finite and within tolerance.
    pub fn push(&mut self, name: impl Into<String>, residual: f64) {
        let passed = residual.is_finite() && residual <= self.tolerance;
        self.checks.push(Check {
            name: name.into(),
            residual,
            passed,
        });
    }

    /// Record a pass/fail check whose residual is not a tolerance comparison.
    pub fn push_flag(&mut self, name: impl Into<String>, residual: f64, passed: bool) {
        self.checks.push(Check {
            name: name.into(),
            residual,
            passed,
        });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }

    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().fold(0.0_f64, |a, c| a.max(c.residual))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "  {:<4} {:<36} {:.3e}",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.residual
            )?;
        }
        Ok(())
    }
}

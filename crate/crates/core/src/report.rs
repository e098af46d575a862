use serde::{Deserialize, Serialize};

/// Outcome of a single named check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Warn,
}

/// One named check with its residual and threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub params: String,
    /// Residual value when the check is numerical; `None` for structural checks.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub status: Status,
}

/// A list of named checks, merged deterministically by name.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self { checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Records a residual check: pass when `residual <= tolerance`.
    pub fn residual(&mut self, name: impl Into<String>, params: impl Into<String>, residual: f64, tolerance: f64) {
        let status = if residual <= tolerance { Status::Pass } else { Status::Fail };
        self.checks.push(Check {
            name: name.into(),
            params: params.into(),
            residual: Some(residual),
            tolerance,
            status,
        });
    }

    /// Records a structural (exact) check.
    pub fn structural(&mut self, name: impl Into<String>, params: impl Into<String>, ok: bool) {
        self.checks.push(Check {
            name: name.into(),
            params: params.into(),
            residual: None,
            tolerance: 0.0,
            status: if ok { Status::Pass } else { Status::Fail },
        });
    }

    pub fn warn(&mut self, name: impl Into<String>, params: impl Into<String>, residual: Option<f64>, tolerance: f64) {
        self.checks.push(Check {
            name: name.into(),
            params: params.into(),
            residual,
            tolerance,
            status: Status::Warn,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    /// Sorts checks by name for deterministic output.
    pub fn sorted(mut self) -> Self {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name).then(a.params.cmp(&b.params)));
        self
    }

    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .filter_map(|c| c.residual)
            .fold(0.0, f64::max)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Versioned JSON envelope written by the CLI and the verification drivers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub schema: u32,
    pub checks: Vec<Check>,
}

impl ReportEnvelope {
    pub fn wrap(report: &VerificationReport) -> Self {
        Self {
            schema: 1,
            checks: report.checks.clone(),
        }
    }
}

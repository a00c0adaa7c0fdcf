//! JSON layout of verification reports.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub kind: String,
    /// failing acceptance checks turn the run red; advisory ones are only reported
    pub acceptance: bool,
    pub passed: bool,
    pub tolerance: Option<f64>,
    pub measured: Option<f64>,
    pub detail: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub config_sha256: String,
    pub checks: Vec<CheckRecord>,
    pub all_passed: bool,
}

impl VerifyReport {
    pub fn new(config_sha256: String, checks: Vec<CheckRecord>) -> Self {
        let all_passed = checks.iter().all(|c| c.passed || !c.acceptance);
        VerifyReport { schema_version: SCHEMA_VERSION, config_sha256, checks, all_passed }
    }
}

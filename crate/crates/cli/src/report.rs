//! Run reports: a deterministic JSON body plus a human-readable rendering.
//! The wall-clock timestamp lives in a sidecar file so that the body of two
//! runs with the same configuration is byte-identical.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::ScenarioConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub values: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, values: Value) -> Self {
        Check { name: name.into(), passed, values }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub config_digest: String,
    pub config: Value,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub results: Value,
}

impl RunReport {
    pub fn new(command: &str, config: &ScenarioConfig, checks: Vec<Check>, results: Value) -> Self {
        RunReport {
            command: command.to_string(),
            version: VERSION.to_string(),
            config_digest: config.digest(),
            config: serde_json::to_value(config).expect("config serializes"),
            passed: checks.iter().all(|c| c.passed),
            checks,
            warnings: config.warnings.clone(),
            results,
        }
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} (wignerghz {}), config {}", self.command, self.version, &self.config_digest[..16]);
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        for c in &self.checks {
            let _ = writeln!(out, "{} {}  {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.values);
        }
        let _ = writeln!(out, "{}", if self.passed { "all checks passed" } else { "some checks FAILED" });
        out
    }
}

/// Extra plain-text artifact written next to the report.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

/// Writes `<dir>/<digest>/<command>.report` (JSON), `<command>.txt`, the
/// artifacts and `<command>.meta.json` with the timestamp. Returns the
/// report path.
pub fn write_report(report: &RunReport, artifacts: &[Artifact], root: &Path) -> std::io::Result<PathBuf> {
    let dir = root.join(&report.config_digest);
    std::fs::create_dir_all(&dir)?;
    let path = dir.join(format!("{}.report", report.command));
    std::fs::write(&path, report.to_json())?;
    std::fs::write(dir.join(format!("{}.txt", report.command)), report.to_text())?;
    for a in artifacts {
        std::fs::write(dir.join(&a.file_name), &a.contents)?;
    }
    let meta = serde_json::json!({
        "command": report.command,
        "config_digest": report.config_digest,
        "timestamp": chrono::Utc::now().to_rfc3339(),
        "version": report.version,
    });
    std::fs::write(dir.join(format!("{}.meta.json", report.command)), format!("{meta:#}\n"))?;
    Ok(path)
}

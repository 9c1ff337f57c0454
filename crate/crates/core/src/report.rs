//! Machine-readable experiment reports.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub inputs: Value,
    pub value: Value,
    /// Bound or oracle value the result is compared with.
    pub reference: Value,
    pub pass: bool,
    /// Only asserted checks decide the exit status.
    pub asserted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn asserted(name: impl Into<String>, inputs: Value, value: Value, reference: Value, pass: bool) -> Self {
        Self {
            name: name.into(),
            inputs,
            value,
            reference,
            pass,
            asserted: true,
            note: None,
        }
    }

    /// A reported quantity that does not affect the exit status.
    pub fn info(name: impl Into<String>, inputs: Value, value: Value) -> Self {
        Self {
            name: name.into(),
            inputs,
            value,
            reference: Value::Null,
            pass: true,
            asserted: false,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub command: Vec<String>,
    pub config: Value,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    /// Full result payload of the command.
    pub data: Value,
    pub wall_time_secs: f64,
}

impl ExperimentReport {
    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.asserted && !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn failures_only_count_asserted() {
        let mut info = CheckRecord::info("trend", json!({}), json!(1.0));
        info.pass = false;
        let report = ExperimentReport {
            command: vec!["dlab".into()],
            config: json!({}),
            seed: 1,
            checks: vec![
                info,
                CheckRecord::asserted("bound", json!({"u": 1}), json!(0.5), json!(1.0), true),
            ],
            data: Value::Null,
            wall_time_secs: 0.0,
        };
        assert!(report.passed());
        let back: ExperimentReport = serde_json::from_str(&report.to_json().unwrap()).unwrap();
        assert_eq!(back, report);
    }
}

//! Versioned JSON documents and CSV tables emitted by the CLI.

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document<T> {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub input: Option<String>,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub result: T,
}

impl<T: Serialize> Document<T> {
    pub fn new(
        command: &str,
        seed: u64,
        input: Option<String>,
        checks: Vec<Check>,
        result: T,
    ) -> Self {
        Document {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            seed,
            input,
            passed: checks.iter().all(|c| c.pass),
            checks,
            result,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Renders a header and rows as CSV.
pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

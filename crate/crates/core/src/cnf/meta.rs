//! Instance metadata sidecars.
//!
//! Each generated instance is accompanied by a `key=value` text file
//! recording the family, generation parameters, seed and, when a
//! construction certifies it, the ground-truth satisfiability. The harness
//! reads these back to group batch results.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetaError {
    #[error("line {line}: expected `key=value`, found {found:?}")]
    MalformedLine { line: usize, found: String },
    #[error("invalid ground_truth value {0:?}, expected `sat` or `unsat`")]
    InvalidGroundTruth(String),
}

/// Sidecar contents. Well-known keys get typed accessors; everything else
/// stays available through [`InstanceMeta::get`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InstanceMeta {
    entries: BTreeMap<String, String>,
}

impl InstanceMeta {
    pub fn new(family: &str) -> Self {
        let mut m = InstanceMeta::default();
        m.set("family", family);
        m
    }

    pub fn set(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.entries.insert(key.to_string(), value.to_string());
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn family(&self) -> Option<&str> {
        self.get("family")
    }

    pub fn difficulty(&self) -> Option<&str> {
        self.get("difficulty")
    }

    pub fn seed(&self) -> Option<u64> {
        self.get("seed").and_then(|s| s.parse().ok())
    }

    /// Certified satisfiability, when the generating construction proves it.
    pub fn ground_truth(&self) -> Option<bool> {
        match self.get("ground_truth") {
            Some("sat") => Some(true),
            Some("unsat") => Some(false),
            _ => None,
        }
    }

    pub fn set_ground_truth(&mut self, satisfiable: bool) -> &mut Self {
        self.set("ground_truth", if satisfiable { "sat" } else { "unsat" })
    }

    /// Serializes as sorted `key=value` lines; deterministic.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

impl FromStr for InstanceMeta {
    type Err = MetaError;

    fn from_str(s: &str) -> Result<Self, MetaError> {
        let mut meta = InstanceMeta::default();
        for (i, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(MetaError::MalformedLine {
                line: i + 1,
                found: line.to_string(),
            })?;
            if k == "ground_truth" && v != "sat" && v != "unsat" {
                return Err(MetaError::InvalidGroundTruth(v.to_string()));
            }
            meta.entries
                .insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(meta)
    }
}

//! Structured verification reports: every batch verifier returns one of
//! these, with a deterministic entry order and an overall pass flag.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub check: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub name: String,
    pub params: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub entries: Vec<CheckEntry>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Report {
        Report {
            name: name.into(),
            params: BTreeMap::new(),
            seed: None,
            entries: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Report {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Report {
        self.seed = Some(seed);
        self
    }

    pub fn push(&mut self, check: impl Into<String>, pass: bool, witness: Option<String>) {
        self.entries.push(CheckEntry { check: check.into(), pass, witness });
    }

    pub fn pass(&mut self, check: impl Into<String>) {
        self.push(check, true, None);
    }

    pub fn fail(&mut self, check: impl Into<String>, witness: impl Into<String>) {
        self.push(check, false, Some(witness.into()));
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn merge(&mut self, other: Report) {
        for e in other.entries {
            self.entries.push(e);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(f, "# {} {}", self.name, params)?;
        if let Some(seed) = self.seed {
            writeln!(f, "# seed = {seed}")?;
        }
        for e in &self.entries {
            let status = if e.pass { "PASS" } else { "FAIL" };
            match &e.witness {
                Some(w) => writeln!(f, "{status} {}  [{w}]", e.check)?,
                None => writeln!(f, "{status} {}", e.check)?,
            }
        }
        writeln!(
            f,
            "# {}/{} checks passed",
            self.entries.iter().filter(|e| e.pass).count(),
            self.entries.len()
        )
    }
}

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    Equal,
    AtMost,
}

/// One expected value, addressed by a JSON pointer into the computed values.
#[derive(Debug, Clone, Serialize)]
pub struct Expectation {
    pub key: String,
    pub value: Value,
    pub provenance: String,
    pub comparison: Comparison,
    pub actual: Option<Value>,
    pub matched: bool,
}

impl Expectation {
    pub fn equal(key: &str, value: impl Into<Value>, provenance: &str) -> Self {
        Expectation {
            key: key.into(),
            value: value.into(),
            provenance: provenance.into(),
            comparison: Comparison::Equal,
            actual: None,
            matched: false,
        }
    }

    pub fn at_most(key: &str, value: f64, provenance: &str) -> Self {
        Expectation {
            comparison: Comparison::AtMost,
            ..Expectation::equal(key, value, provenance)
        }
    }

    fn evaluate(&mut self, computed: &Value) {
        self.actual = computed.pointer(&self.key).cloned();
        self.matched = match (&self.actual, self.comparison) {
            (None, _) => false,
            (Some(a), Comparison::Equal) => *a == self.value,
            (Some(a), Comparison::AtMost) => match (a.as_f64(), self.value.as_f64()) {
                (Some(x), Some(bound)) => x <= bound,
                _ => false,
            },
        };
    }
}

/// Adds or replaces expectations by key; later entries win.
pub fn merge(base: &mut Vec<Expectation>, extra: impl IntoIterator<Item = Expectation>) {
    for e in extra {
        match base.iter_mut().find(|b| b.key == e.key) {
            Some(slot) => *slot = e,
            None => base.push(e),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub suite: String,
    pub tool_version: String,
    pub parameters: BTreeMap<String, Value>,
    pub computed: Value,
    pub expected: Vec<Expectation>,
    /// Sign conventions fixed during the run, where the suite has any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants: Option<Value>,
    pub module_pass: bool,
    pub pass: bool,
    pub runtime_ms: u64,
}

impl Certificate {
    pub fn new(
        suite: &str,
        parameters: BTreeMap<String, Value>,
        computed: Value,
        mut expected: Vec<Expectation>,
        constants: Option<Value>,
        module_pass: bool,
        runtime_ms: u64,
    ) -> Self {
        for e in &mut expected {
            e.evaluate(&computed);
        }
        let pass = module_pass && expected.iter().all(|e| e.matched);
        Certificate {
            suite: suite.into(),
            tool_version: TOOL_VERSION.into(),
            parameters,
            computed,
            expected,
            constants,
            module_pass,
            pass,
            runtime_ms,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn failed_keys(&self) -> Vec<&str> {
        self.expected.iter().filter(|e| !e.matched).map(|e| e.key.as_str()).collect()
    }
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn pointer_lookup_and_tolerance() {
        let computed = json!({"dim": 8, "dev": 1e-12, "dims": {"1": 0}});
        let cert = Certificate::new(
            "x",
            BTreeMap::new(),
            computed,
            vec![
                Expectation::equal("/dim", 8, "t"),
                Expectation::at_most("/dev", 1e-9, "t"),
                Expectation::equal("/dims/1", 0, "t"),
            ],
            None,
            true,
            0,
        );
        assert!(cert.pass, "{cert:?}");
    }

    #[test]
    fn missing_key_fails() {
        let cert = Certificate::new(
            "x",
            BTreeMap::new(),
            json!({}),
            vec![Expectation::equal("/dim", 1, "t")],
            None,
            true,
            0,
        );
        assert!(!cert.pass);
        assert_eq!(cert.failed_keys(), vec!["/dim"]);
    }

    #[test]
    fn merge_replaces_by_key() {
        let mut v = vec![Expectation::equal("/a", 1, "x")];
        merge(&mut v, [Expectation::equal("/a", 2, "y"), Expectation::equal("/b", 3, "z")]);
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].value, 2);
    }
}

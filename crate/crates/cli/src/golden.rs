use std::collections::BTreeMap;

use anyhow::{bail, Result};
use serde::Deserialize;
use serde_json::Value;

use crate::report::Expectation;

const GOLDEN: &str = include_str!("../golden.toml");
const SUPPORTED_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenEntry {
    pub suite: String,
    #[serde(default)]
    pub params: BTreeMap<String, i64>,
    pub key: String,
    pub value: Value,
    pub provenance: String,
}

#[derive(Debug, Deserialize)]
struct GoldenFile {
    version: u32,
    #[serde(default)]
    entry: Vec<GoldenEntry>,
}

pub fn parse(text: &str) -> Result<Vec<GoldenEntry>> {
    let file: GoldenFile = toml::from_str(text)?;
    if file.version != SUPPORTED_VERSION {
        bail!("golden file version {} unsupported", file.version);
    }
    Ok(file.entry)
}

pub fn builtin() -> Vec<GoldenEntry> {
    parse(GOLDEN).expect("bundled golden file parses")
}

fn param_matches(requested: Option<&Value>, wanted: i64) -> bool {
    match requested {
        Some(Value::Array(list)) => list.iter().any(|x| x.as_i64() == Some(wanted)),
        Some(x) => x.as_i64() == Some(wanted),
        None => false,
    }
}

/// Entries for `suite` whose params all agree with the request.
/// A list-valued request parameter agrees when it contains the entry's value.
pub fn lookup(entries: &[GoldenEntry], suite: &str, params: &BTreeMap<String, Value>) -> Vec<Expectation> {
    entries
        .iter()
        .filter(|e| e.suite == suite)
        .filter(|e| e.params.iter().all(|(k, v)| param_matches(params.get(k), *v)))
        .map(|e| Expectation::equal(&e.key, e.value.clone(), &e.provenance))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_file_parses_and_is_tagged() {
        let entries = builtin();
        assert!(!entries.is_empty());
        let tags = ["published-table", "closed-form", "identity", "search-record", "elementary"];
        for e in &entries {
            assert!(tags.iter().any(|t| e.provenance.starts_with(t)), "{e:?}");
            assert!(e.key.starts_with('/'));
        }
    }

    #[test]
    fn lookup_matches_params() {
        let entries = builtin();
        let params: BTreeMap<String, Value> = [("n".to_string(), Value::from(3)), ("p".to_string(), Value::from(2))].into();
        let found = lookup(&entries, "solomon-tits", &params);
        assert!(found.iter().any(|e| e.key == "/dim" && e.value == 8));
        assert!(lookup(&entries, "solomon-tits", &BTreeMap::new()).is_empty());
        let levels: BTreeMap<String, Value> = [("level".to_string(), serde_json::json!([1, 2]))].into();
        assert_eq!(lookup(&entries, "modular-symbols", &levels).len(), 1);
        let levels: BTreeMap<String, Value> = [("level".to_string(), serde_json::json!([2, 3]))].into();
        assert!(lookup(&entries, "modular-symbols", &levels).is_empty());
    }

    #[test]
    fn rejects_unknown_version() {
        assert!(parse("version = 2\n").is_err());
    }
}

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use steinberg_core::modular::LevelReport;

use crate::golden::GoldenEntry;
use crate::report::{write_atomic, Certificate, Expectation};
use crate::suites::{certify, is_usage_error, Params, Suite};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub suite: Vec<SuiteSpec>,
}

/// One `[[suite]]` table. List-valued fields span a grid; `level` is passed whole.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    pub name: Suite,
    pub n: Option<Vec<usize>>,
    pub p: Option<Vec<u64>>,
    pub level: Option<Vec<u64>>,
    pub height: Option<Vec<i64>>,
    pub word_length: Option<Vec<usize>>,
    #[serde(default)]
    pub expected: BTreeMap<String, Value>,
}

#[derive(Debug, Clone)]
pub struct Job {
    pub suite: Suite,
    pub params: Params,
    pub expected: Vec<Expectation>,
}

pub fn load(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

fn axis<T: Clone>(values: &Option<Vec<T>>, default: T) -> Vec<T> {
    values.clone().unwrap_or_else(|| vec![default])
}

pub fn expand(config: &Config) -> Vec<Job> {
    let d = Params::default();
    let mut jobs = Vec::new();
    for table in &config.suite {
        let expected: Vec<Expectation> = table
            .expected
            .iter()
            .map(|(k, v)| Expectation::equal(k, v.clone(), "config"))
            .collect();
        let levels = table.level.clone().unwrap_or_else(|| d.levels.clone());
        for &n in &axis(&table.n, d.n) {
            for &p in &axis(&table.p, d.p) {
                for &height in &axis(&table.height, d.height) {
                    for &word_length in &axis(&table.word_length, d.word_length) {
                        jobs.push(Job {
                            suite: table.name,
                            params: Params {
                                n,
                                p,
                                levels: levels.clone(),
                                height,
                                word_length,
                            },
                            expected: expected.clone(),
                        });
                    }
                }
            }
        }
    }
    jobs
}

/// File name stem, e.g. `solomon-tits_n3_p2`.
pub fn file_stem(suite: Suite, params: &Params) -> String {
    let mut stem = suite.name().to_string();
    for (k, v) in params.relevant(suite) {
        let v = match v {
            Value::Array(a) => a.iter().map(Value::to_string).collect::<Vec<_>>().join("-"),
            other => other.to_string(),
        };
        stem.push_str(&format!("_{k}{v}"));
    }
    stem
}

/// Table of per-level results for the modular symbols suite.
pub fn levels_csv(levels: &[LevelReport]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["N", "cosets", "relation_rank", "dim_h1", "oracle", "pass"])?;
    for r in levels {
        w.write_record([
            r.level.to_string(),
            r.cosets.to_string(),
            r.relation_rank.to_string(),
            r.dim.to_string(),
            r.oracle.map(|o| o.to_string()).unwrap_or_default(),
            r.pass.to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| anyhow!("csv: {e}"))
}

/// Writes the certificate JSON, plus a CSV next to it when there are level rows.
pub fn write_outputs(cert: &Certificate, levels: Option<&[LevelReport]>, json_path: &Path) -> Result<()> {
    write_atomic(json_path, cert.to_json()?.as_bytes())?;
    if let Some(levels) = levels {
        write_atomic(&json_path.with_extension("csv"), &levels_csv(levels)?)?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct JobSummary {
    pub suite: String,
    pub parameters: BTreeMap<String, Value>,
    pub file: Option<String>,
    pub pass: bool,
    pub failed_keys: Vec<String>,
    pub error: Option<String>,
    pub usage_error: bool,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub tool_version: String,
    pub jobs: Vec<JobSummary>,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

impl Summary {
    pub fn exit_code(&self) -> u8 {
        if self.jobs.iter().any(|j| j.usage_error) {
            2
        } else if self.pass {
            0
        } else {
            1
        }
    }
}

fn run_job(job: &Job, golden: &[GoldenEntry], out: &Path) -> JobSummary {
    let parameters = job.params.relevant(job.suite);
    let mut summary = JobSummary {
        suite: job.suite.name().into(),
        parameters,
        file: None,
        pass: false,
        failed_keys: vec![],
        error: None,
        usage_error: false,
    };
    match certify(job.suite, &job.params, golden, job.expected.clone()) {
        Ok((cert, levels)) => {
            let name = format!("{}.json", file_stem(job.suite, &job.params));
            match write_outputs(&cert, levels.as_deref(), &out.join(&name)) {
                Ok(()) => {
                    summary.file = Some(name);
                    summary.pass = cert.pass;
                    summary.failed_keys = cert.failed_keys().into_iter().map(String::from).collect();
                }
                Err(e) => summary.error = Some(format!("{e:#}")),
            }
        }
        Err(e) => {
            summary.usage_error = is_usage_error(&e);
            summary.error = Some(e.to_string());
        }
    }
    summary
}

/// Runs every job on a pool of `workers` threads and writes `summary.json` into `out`.
pub fn run_all(jobs: &[Job], golden: &[GoldenEntry], out: &Path, workers: usize) -> Result<(Summary, PathBuf)> {
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    let results: Vec<JobSummary> = pool.install(|| jobs.par_iter().map(|j| run_job(j, golden, out)).collect());
    let passed = results.iter().filter(|j| j.pass).count();
    let summary = Summary {
        tool_version: crate::report::TOOL_VERSION.into(),
        failed: results.len() - passed,
        passed,
        pass: passed == results.len(),
        jobs: results,
    };
    let path = out.join("summary.json");
    write_atomic(&path, (serde_json::to_string_pretty(&summary)? + "\n").as_bytes())?;
    Ok((summary, path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Config {
        toml::from_str(text).unwrap()
    }

    #[test]
    fn grid_is_cartesian() {
        let c = parse("[[suite]]\nname = \"solomon-tits\"\nn = [2, 3]\np = [2, 3, 5]\n");
        let jobs = expand(&c);
        assert_eq!(jobs.len(), 6);
        assert_eq!(jobs[0].params.n, 2);
        assert_eq!(jobs[5].params.p, 5);
    }

    #[test]
    fn empty_axis_gives_no_jobs() {
        let c = parse("[[suite]]\nname = \"ash-exactness\"\nn = []\n");
        assert!(expand(&c).is_empty());
    }

    #[test]
    fn levels_stay_together() {
        let c = parse("[[suite]]\nname = \"modular-symbols\"\nlevel = [1, 2, 3]\n");
        let jobs = expand(&c);
        assert_eq!(jobs.len(), 1);
        assert_eq!(jobs[0].params.levels, vec![1, 2, 3]);
        assert_eq!(file_stem(jobs[0].suite, &jobs[0].params), "modular-symbols_level1-2-3");
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(toml::from_str::<Config>("[[suite]]\nname = \"lattice\"\nheigth = [1]\n").is_err());
        assert!(toml::from_str::<Config>("[[suite]]\nname = \"no-such-suite\"\n").is_err());
    }

    #[test]
    fn expected_overrides_parse() {
        let c = parse("[[suite]]\nname = \"solomon-tits\"\nexpected = { \"/dim\" = 9 }\n");
        let jobs = expand(&c);
        assert_eq!(jobs[0].expected[0].key, "/dim");
        assert_eq!(jobs[0].expected[0].value, 9);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let rows = vec![
            steinberg_core::modular::level_report(1).unwrap(),
            steinberg_core::modular::level_report(2).unwrap(),
        ];
        let text = String::from_utf8(levels_csv(&rows).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "N,cosets,relation_rank,dim_h1,oracle,pass");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("1,"));
    }
}

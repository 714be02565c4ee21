//! `steinberg-lab`: runs the steinberg-core checks and writes JSON certificates.
//!
//! Exit codes: 0 when every expectation holds, 1 when a check fails,
//! 2 for bad arguments, a missing or malformed config, or a size bound.

mod config;
mod golden;
mod report;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use suites::{Params, Suite};

const WORKERS_ENV: &str = "STEINBERG_LAB_WORKERS";

#[derive(Debug, Clone, PartialEq, Eq)]
struct Levels(Vec<u64>);

/// Accepts `3`, `1,2,5` or an inclusive range `1..5`.
fn parse_levels(s: &str) -> Result<Levels, String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("bad level {t:?}: {e}"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(format!("empty level range {s}"));
        }
        return Ok(Levels((a..=b).collect()));
    }
    s.split(',').map(num).collect::<Result<_, _>>().map(Levels)
}

#[derive(Debug, Parser)]
#[command(
    name = "steinberg-lab",
    version,
    about = "Exact checks on Steinberg modules, modular symbols and an arithmetic lattice"
)]
struct Cli {
    /// Suite to run.
    #[arg(long, value_enum, required_unless_present = "config", conflicts_with = "config")]
    suite: Option<Suite>,
    /// Rank of the general linear group.
    #[arg(long)]
    n: Option<usize>,
    /// Prime field size.
    #[arg(long)]
    p: Option<u64>,
    /// Levels for modular-symbols: `N`, `N1,N2,...` or `A..B`.
    #[arg(long, value_parser = parse_levels)]
    level: Option<Levels>,
    /// Entry height bound for the lattice search.
    #[arg(long)]
    height: Option<i64>,
    /// Longest word checked for unipotent elements.
    #[arg(long)]
    word_length: Option<usize>,
    /// Output file for one suite, or output directory with --config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (falls back to STEINBERG_LAB_WORKERS, then all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// TOML file describing a batch of runs.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn workers(flag: Option<usize>) -> Result<usize> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var(WORKERS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| anyhow::anyhow!("{WORKERS_ENV}={v:?} is not a number"))?,
            Err(_) => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        },
    };
    anyhow::ensure!(n > 0, "worker count must be positive");
    Ok(n)
}

fn run_single(cli: &Cli, suite: Suite, workers: usize) -> Result<u8> {
    let d = Params::default();
    let params = Params {
        n: cli.n.unwrap_or(d.n),
        p: cli.p.unwrap_or(d.p),
        levels: cli.level.clone().map(|l| l.0).unwrap_or(d.levels),
        height: cli.height.unwrap_or(d.height),
        word_length: cli.word_length.unwrap_or(d.word_length),
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    let golden = golden::builtin();
    let (cert, levels) = match pool.install(|| suites::certify(suite, &params, &golden, vec![])) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {} ({}): {e}", suite.name(), params.label(suite));
            return Ok(if suites::is_usage_error(&e) { 2 } else { 1 });
        }
    };
    match &cli.out {
        Some(path) => {
            config::write_outputs(&cert, levels.as_deref(), path)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{}", cert.to_json()?),
    }
    if cert.pass {
        eprintln!("{} ({}): PASS", suite.name(), params.label(suite));
        Ok(0)
    } else {
        let failed = if cert.module_pass {
            cert.failed_keys().join(", ")
        } else {
            "module check".into()
        };
        eprintln!("{} ({}): FAIL [{failed}]", suite.name(), params.label(suite));
        Ok(1)
    }
}

fn run_config(cli: &Cli, path: &Path, workers: usize) -> Result<u8> {
    let cfg = match config::load(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return Ok(2);
        }
    };
    let jobs = config::expand(&cfg);
    if jobs.is_empty() {
        eprintln!("warning: {} expands to no runs", path.display());
    }
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("certificates"));
    let (summary, summary_path) = config::run_all(&jobs, &golden::builtin(), &out, workers)?;
    for j in &summary.jobs {
        let label = serde_json::to_string(&j.parameters)?;
        match (&j.error, j.pass) {
            (Some(e), _) => eprintln!("{} {label}: ERROR {e}", j.suite),
            (None, true) => eprintln!("{} {label}: PASS", j.suite),
            (None, false) => eprintln!("{} {label}: FAIL [{}]", j.suite, j.failed_keys.join(", ")),
        }
    }
    eprintln!(
        "{}/{} passed; summary in {}",
        summary.passed,
        summary.jobs.len(),
        summary_path.display()
    );
    Ok(summary.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = workers(cli.workers).and_then(|w| match (&cli.config, cli.suite) {
        (Some(path), _) => run_config(&cli, path, w),
        (None, Some(suite)) => run_single(&cli, suite, w),
        (None, None) => unreachable!("clap requires --suite or --config"),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

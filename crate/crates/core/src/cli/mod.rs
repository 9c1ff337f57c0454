//! `dlab` command-line driver.

mod args;
mod commands;

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::Parser;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use dirichlet_lab::report::{CheckRecord, ExperimentReport};

pub use args::Cli;

/// Result of one subcommand before it is wrapped into a report.
pub struct Outcome {
    pub config: Value,
    pub checks: Vec<CheckRecord>,
    pub data: Value,
    pub table: Option<Table>,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn of_checks(checks: &[CheckRecord]) -> Self {
        let mut t = Table::new(&["name", "value", "reference", "pass", "asserted"]);
        for c in checks {
            t.push(vec![
                c.name.clone(),
                c.value.to_string(),
                c.reference.to_string(),
                c.pass.to_string(),
                c.asserted.to_string(),
            ]);
        }
        t
    }

    fn write(&self, path: &Path) -> anyhow::Result<()> {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Parameters from `--config`, keyed like the flags (`-` and `_` both accepted).
pub struct Config {
    params: Map<String, Value>,
    seed: Option<u64>,
}

impl Config {
    fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(Self {
                params: Map::new(),
                seed: None,
            });
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        let value: Value =
            serde_json::from_str(&text).with_context(|| format!("config {} is not valid JSON", path.display()))?;
        let Value::Object(obj) = value else {
            bail!("config {} must be a JSON object", path.display());
        };
        let mut params = Map::new();
        let mut seed = None;
        for (k, v) in obj {
            if k == "seed" {
                seed = Some(v.as_u64().context("config seed must be a nonnegative integer")?);
            } else {
                params.insert(k.replace('-', "_"), v);
            }
        }
        Ok(Self { params, seed })
    }

    /// Overlays the flags given on the command line onto the config parameters.
    pub fn merge<T: Serialize + DeserializeOwned>(&self, cli: &T) -> anyhow::Result<(T, Value)> {
        let mut merged = self.params.clone();
        if let Value::Object(flags) = serde_json::to_value(cli)? {
            merged.extend(flags);
        }
        let value = Value::Object(merged);
        let args = serde_json::from_value(value.clone()).context("invalid config parameters")?;
        Ok((args, value))
    }
}

fn resolve_seed(cli: &Cli, config: &Config) -> anyhow::Result<u64> {
    if let Ok(text) = std::env::var("DLAB_SEED") {
        return text
            .trim()
            .parse()
            .with_context(|| format!("DLAB_SEED={text:?} is not a nonnegative integer"));
    }
    Ok(cli.seed.or(config.seed).unwrap_or(0))
}

fn run(cli: &Cli, argv: &[String]) -> anyhow::Result<(ExperimentReport, Table)> {
    let start = Instant::now();
    let config = Config::load(cli.config.as_deref())?;
    let seed = resolve_seed(cli, &config)?;
    let outcome = commands::dispatch(&cli.command, &config, seed)?;
    let table = match outcome.table {
        Some(t) => t,
        None => Table::of_checks(&outcome.checks),
    };
    let report = ExperimentReport {
        command: argv.to_vec(),
        config: outcome.config,
        seed,
        checks: outcome.checks,
        data: outcome.data,
        wall_time_secs: start.elapsed().as_secs_f64(),
    };
    Ok((report, table))
}

pub fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (report, table) = match run(&cli, &argv) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = report
        .write(&cli.out)
        .map_err(anyhow::Error::from)
        .and_then(|_| match &cli.csv {
            Some(path) => table.write(path),
            None => Ok(()),
        });
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    println!(
        "{}: {} checks, report {}",
        cli.command.name(),
        report.checks.len(),
        cli.out.display()
    );
    for c in &report.checks {
        let tag = match (c.asserted, c.pass) {
            (true, true) => "PASS",
            (true, false) => "FAIL",
            (false, _) => "INFO",
        };
        println!("  {tag} {} = {}", c.name, c.value);
    }
    let failures = report.failures();
    if failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed checks: {}", failures.join(", "));
        ExitCode::from(1)
    }
}

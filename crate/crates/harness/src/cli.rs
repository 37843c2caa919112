//! Command-line front end: one subcommand per experiment, a JSON config
//! document with every field defaulted, dotted-path overrides for any
//! config field, and a handful of shorthand flags for the common knobs.
//!
//! Exit codes: 0 on success (including `--help`/`--version`), 1 for
//! usage and configuration problems, 2 for numerical failures (internal
//! cross-checks or validation distances out of tolerance).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::config::{apply_dotted_override, Config, ExperimentKind};
use crate::error::HarnessError;
use crate::experiments;
use crate::report::{CsvTable, RunOutput};

/// Environment variable that overrides the master seed after all other
/// sources (config file, dotted overrides, `--seed`).
pub const SEED_ENV_VAR: &str = "POLYVOTE_SEED";

// ====================================================================
// Argument grammar
// ====================================================================

#[derive(Debug, Parser)]
#[command(
    name = "polyvote",
    version,
    about = "Simulation and validation harness for a stake-weighted voting rule with a dampening exponent"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate volume trajectories and summarize final volumes
    Simulate(CommonArgs),
    /// Estimate deviation probabilities of the volume around its growth law
    Tails(CommonArgs),
    /// Solve for the deviation-rate roots and related constants
    Roots(CommonArgs),
    /// Sweep share stability across bidder scales and volumes
    Phase(CommonArgs),
    /// Compare trading policies on shared chain and price paths
    Trade(CommonArgs),
    /// Measure distance of rescaled volume paths to the deterministic limit
    Fluid(CommonArgs),
    /// Run the self-validation battery against exact distributions
    OracleCheck(CommonArgs),
}

impl Command {
    fn split(self) -> (ExperimentKind, CommonArgs) {
        match self {
            Command::Simulate(a) => (ExperimentKind::Simulate, a),
            Command::Tails(a) => (ExperimentKind::Tails, a),
            Command::Roots(a) => (ExperimentKind::Roots, a),
            Command::Phase(a) => (ExperimentKind::Phase, a),
            Command::Trade(a) => (ExperimentKind::Trade, a),
            Command::Fluid(a) => (ExperimentKind::Fluid, a),
            Command::OracleCheck(a) => (ExperimentKind::OracleCheck, a),
        }
    }
}

/// Flags shared by every subcommand. Each is a shorthand for one config
/// field and wins over the config file and dotted overrides.
#[derive(Debug, Args)]
struct CommonArgs {
    /// Path to a JSON configuration document
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed (the POLYVOTE_SEED environment variable overrides even this)
    #[arg(long)]
    seed: Option<u64>,
    /// Replication count
    #[arg(long)]
    reps: Option<u64>,
    /// Worker threads; 0 uses the machine default
    #[arg(long)]
    threads: Option<usize>,
    /// Dampening exponent of the voting rule
    #[arg(long)]
    alpha: Option<f64>,
    /// Single-bidder shorthand: sets the initial stake vector to [N0]
    #[arg(long)]
    n0: Option<f64>,
    /// Round horizon for the simulate experiment
    #[arg(long)]
    horizon: Option<u64>,
    /// Also write the JSON report to this file
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the main CSV table to this file
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write a per-round trading ledger CSV to this file (trade only)
    #[arg(long)]
    ledger_csv: Option<PathBuf>,
}

// ====================================================================
// Dotted-override extraction
// ====================================================================

/// Top-level config sections that may be replaced wholesale from the
/// command line (`--policies '[...]'`). The experiment kind is excluded:
/// it is fixed by the subcommand.
const SECTION_FLAGS: [&str; 5] = ["protocol", "market", "policies", "mc", "output"];

/// Splits the raw argument list into arguments for the normal parser and
/// config overrides, which the flag grammar cannot express: dotted paths
/// (`--section.field value` or `--section.field=value`) and whole-section
/// replacements (`--section <json>`).
fn extract_dotted(
    args: Vec<OsString>,
) -> Result<(Vec<OsString>, Vec<(String, String)>), HarnessError> {
    let mut keep = Vec::with_capacity(args.len());
    let mut overrides = Vec::new();
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        let text = arg.to_str().map(str::to_string);
        let Some(text) = text else {
            keep.push(arg);
            continue;
        };
        let Some(flag) = text.strip_prefix("--") else {
            keep.push(arg);
            continue;
        };
        let (name, inline) = match flag.split_once('=') {
            Some((n, v)) => (n.to_string(), Some(v.to_string())),
            None => (flag.to_string(), None),
        };
        if !name.contains('.') && !SECTION_FLAGS.contains(&name.as_str()) {
            keep.push(arg);
            continue;
        }
        let value = match inline {
            Some(v) => v,
            None => iter
                .next()
                .and_then(|v| v.to_str().map(str::to_string))
                .ok_or_else(|| {
                    HarnessError::Usage(format!("override --{name} needs a value"))
                })?,
        };
        overrides.push((name, value));
    }
    Ok((keep, overrides))
}

// ====================================================================
// Configuration assembly
// ====================================================================

/// Merges `incoming` into `base`: objects merge key-by-key, everything
/// else (including arrays) replaces the existing value.
fn deep_merge(base: &mut serde_json::Value, incoming: serde_json::Value) {
    match (base, incoming) {
        (serde_json::Value::Object(b), serde_json::Value::Object(i)) => {
            for (key, value) in i {
                match b.get_mut(&key) {
                    Some(slot) => deep_merge(slot, value),
                    None => {
                        b.insert(key, value);
                    }
                }
            }
        }
        (slot, value) => *slot = value,
    }
}

/// Layers all configuration sources, weakest first: built-in defaults,
/// the config file, dotted overrides, shorthand flags, then the seed
/// environment variable. Starting from the fully defaulted document lets
/// dotted paths reach into default-provided arrays such as the policy
/// roster.
fn build_config(
    kind: ExperimentKind,
    common: &CommonArgs,
    overrides: &[(String, String)],
) -> Result<Config, HarnessError> {
    let mut doc = serde_json::to_value(Config::default())
        .map_err(|e| HarnessError::Config(format!("default configuration: {e}")))?;
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::ConfigFile {
            path: path.clone(),
            source,
        })?;
        let file_doc = serde_json::from_str::<serde_json::Value>(&text)
            .map_err(|e| HarnessError::Config(format!("config file {}: {e}", path.display())))?;
        deep_merge(&mut doc, file_doc);
    }
    for (path, raw) in overrides {
        apply_dotted_override(&mut doc, path, raw)?;
    }
    let mut config: Config = serde_json::from_value(doc)
        .map_err(|e| HarnessError::Config(format!("invalid configuration: {e}")))?;

    config.experiment = kind;
    if let Some(seed) = common.seed {
        config.mc.seed = seed;
    }
    if let Some(reps) = common.reps {
        config.mc.replications = reps;
    }
    if let Some(threads) = common.threads {
        config.mc.threads = threads;
    }
    if let Some(alpha) = common.alpha {
        config.protocol.alpha = alpha;
    }
    if let Some(n0) = common.n0 {
        config.protocol.initial_stakes = vec![n0];
    }
    if let Some(horizon) = common.horizon {
        config.mc.horizon = horizon;
    }
    if common.json.is_some() {
        config.output.json = common.json.clone();
    }
    if common.csv.is_some() {
        config.output.csv = common.csv.clone();
    }
    if common.ledger_csv.is_some() {
        config.output.ledger_csv = common.ledger_csv.clone();
    }

    if let Ok(value) = std::env::var(SEED_ENV_VAR) {
        config.mc.seed = value.trim().parse::<u64>().map_err(|_| {
            HarnessError::Config(format!(
                "{SEED_ENV_VAR} must be an unsigned integer, got '{value}'"
            ))
        })?;
    }
    Ok(config)
}

// ====================================================================
// Output emission
// ====================================================================

fn write_csv(path: &Path, table: &CsvTable) -> Result<(), HarnessError> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| HarnessError::Config(format!("cannot open {}: {e}", path.display())))?;
    writer
        .write_record(&table.header)
        .and_then(|_| {
            for row in &table.rows {
                writer.write_record(row)?;
            }
            writer.flush().map_err(csv::Error::from)
        })
        .map_err(|e| HarnessError::Config(format!("writing {}: {e}", path.display())))
}

fn emit(config: &Config, output: &RunOutput) -> Result<(), HarnessError> {
    let json = serde_json::to_string_pretty(&output.report)
        .map_err(|e| HarnessError::Config(format!("report serialization: {e}")))?;
    println!("{json}");
    if let Some(path) = &config.output.json {
        std::fs::write(path, format!("{json}\n"))?;
    }
    if let Some(path) = &config.output.csv {
        if let Some(table) = &output.main_csv {
            write_csv(path, table)?;
        }
    }
    if let Some(path) = &config.output.ledger_csv {
        if let Some(table) = &output.ledger_csv {
            write_csv(path, table)?;
        }
    }
    Ok(())
}

// ====================================================================
// Entry point
// ====================================================================

fn try_run(args: Vec<OsString>) -> Result<i32, HarnessError> {
    let (clap_args, overrides) = extract_dotted(args)?;
    let cli = match Cli::try_parse_from(&clap_args) {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are successes; anything else is a
            // usage problem.
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return Ok(code);
        }
    };
    let (kind, common) = cli.command.split();
    let config = build_config(kind, &common, &overrides)?;
    let output = experiments::dispatch(&config)?;
    emit(&config, &output)?;
    Ok(0)
}

/// Runs the CLI and returns the process exit code.
pub fn run(args: Vec<OsString>) -> i32 {
    match try_run(args) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

// ====================================================================
// Tests
// ====================================================================

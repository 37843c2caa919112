//! The experiment implementations behind each CLI subcommand. Every
//! module exposes a typed entry point (used directly by the test suites)
//! plus a `run(&Config)` wrapper producing the report and CSV tables.

pub mod fluid;
pub mod oracle_check;
pub mod phase;
pub mod roots;
pub mod simulate;
pub mod tails;
pub mod trade;

use std::time::Instant;

use crate::config::{Config, ExperimentKind};
use crate::error::HarnessError;
use crate::report::RunOutput;

/// Runs the experiment selected by `config.experiment`, stamping the
/// wall-clock time into the report.
pub fn dispatch(config: &Config) -> Result<RunOutput, HarnessError> {
    config.validate()?;
    let started = Instant::now();
    let mut output = match config.experiment {
        ExperimentKind::Simulate => simulate::run(config)?,
        ExperimentKind::Tails => tails::run(config)?,
        ExperimentKind::Roots => roots::run(config)?,
        ExperimentKind::Phase => phase::run(config)?,
        ExperimentKind::Trade => trade::run(config)?,
        ExperimentKind::Fluid => fluid::run(config)?,
        ExperimentKind::OracleCheck => oracle_check::run(config)?,
    };
    output.report.wall_clock_secs = started.elapsed().as_secs_f64();
    Ok(output)
}

//! Monte Carlo harness and command-line front end for the stake-weighted
//! voting rule implemented in `polyvote-core`.
//!
//! The crate is organized as:
//!
//! - [`config`]: one JSON document with sections `{experiment, protocol,
//!   market, policies, mc, output}`, every field defaulted and reachable
//!   from the command line by dotted path;
//! - [`mc`]: seeded stream derivation and a deterministic parallel
//!   replication runner (results are bitwise independent of the thread
//!   count);
//! - [`experiments`]: the seven experiment entry points behind the CLI
//!   subcommands;
//! - [`report`]: estimate/report structures serialized to JSON and CSV;
//! - [`cli`]: argument grammar, configuration layering, and exit codes.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod mc;
pub mod report;

pub use error::HarnessError;

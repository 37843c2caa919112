//! Error taxonomy of the runner. Two exit-relevant families: problems
//! with the invocation or configuration (exit 1) and numerical assertion
//! failures discovered while running (exit 2).

use std::path::PathBuf;

use polyvote_core::{AsymptoticsError, ChainError, OracleError, TradingError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("cannot read config file {path}: {source}")]
    ConfigFile {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("numerical check failed: {0}")]
    Numerical(String),
}

impl HarnessError {
    /// Process exit status: 1 for usage/configuration/IO problems, 2 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Numerical(_) => 2,
            _ => 1,
        }
    }
}

impl From<ChainError> for HarnessError {
    fn from(e: ChainError) -> Self {
        HarnessError::Config(e.to_string())
    }
}

impl From<TradingError> for HarnessError {
    fn from(e: TradingError) -> Self {
        match e {
            // A non-positive sampled price means the model produced an
            // inadmissible value at runtime, not that the config was bad.
            TradingError::NonPositivePrice(_) => HarnessError::Numerical(e.to_string()),
            other => HarnessError::Config(other.to_string()),
        }
    }
}

impl From<OracleError> for HarnessError {
    fn from(e: OracleError) -> Self {
        match e {
            // The dual-route cross-check failing is a numerical assertion;
            // exceeding a state or depth limit is a configuration problem.
            OracleError::InternalConsistency { .. } => HarnessError::Numerical(e.to_string()),
            other => HarnessError::Config(other.to_string()),
        }
    }
}

impl From<AsymptoticsError> for HarnessError {
    fn from(e: AsymptoticsError) -> Self {
        match e {
            AsymptoticsError::Bracketing { .. } => HarnessError::Numerical(e.to_string()),
            other => HarnessError::Config(other.to_string()),
        }
    }
}

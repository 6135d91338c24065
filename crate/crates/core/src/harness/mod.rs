//! Experiments: recording a context game, rediscovering its parameters with
//! several player setups, sweeping criterion landscapes, replays.
//!
//! An experiment is a TOML file:
//!
//! ```toml
//! spec-version = 1
//! output = "out/desk"
//! runs = 5
//! base-seed = 7
//!
//! [context]
//! seed = 1
//! horizon = 2000
//!
//! [optimizer]
//! m = 12
//! n = 20
//! mutation-prob = 0.05
//! tau0 = 50.0
//! alpha = 0.998
//! i-max = 5
//! step = 0.1
//!
//! [[player]]
//! label = "player2"
//! template = "A"
//! restrict = [{ slot = "a.phase.1", lo = 650.0, hi = 1000.0 }]
//! ```
//!
//! Run `r` of every player uses seed `base-seed * 1000 + r`.

mod commands;
mod experiment;

use std::path::PathBuf;

pub use commands::{
    cmd_landscape, cmd_optimize, cmd_record, cmd_similarity, context_path, landscape, load_context, load_record,
    optimize_run, play_context, player_evaluator, replay, LandscapeRow, MeanRow, PlayerOutcome, RunOutcome,
    CONTEXT_RECORD,
};
pub use experiment::{ContextSetup, ExperimentSpec, PlayerSetup, Restriction, SPEC_VERSION};

use crate::btree::BindError;
use crate::hexsim::ConfigError;
use crate::optimize::{EvalError, OptimizeError};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{what}: {message}")]
    Parse { what: String, message: String },
    #[error("{0}")]
    Spec(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Bind(#[from] BindError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
    #[error("context game failed: {0}")]
    ContextFailed(String),
    #[error("no matching context record at {} (run `record` first)", .0.display())]
    MissingContext(PathBuf),
    #[error("replay differs: {0}")]
    ReplayMismatch(String),
}

impl HarnessError {
    /// Short stable name of the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            HarnessError::Io { .. } => "io",
            HarnessError::Parse { .. } => "parse",
            HarnessError::Spec(_) => "spec",
            HarnessError::Config(_) => "config",
            HarnessError::Bind(_) => "bind",
            HarnessError::Eval(_) | HarnessError::Optimize(_) => "evaluation",
            HarnessError::ContextFailed(_) => "context-failed",
            HarnessError::MissingContext(_) => "missing-context",
            HarnessError::ReplayMismatch(_) => "replay-mismatch",
        }
    }
}

/// Sizes the global worker pool used for batch evaluations. Only the first
/// call takes effect.
pub fn set_parallelism(threads: usize) -> bool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().is_ok()
}

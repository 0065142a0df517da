//! Library side of the `primecert` command: argument types, theorem
//! selection and the commands themselves. `main.rs` only does I/O.

pub mod commands;
pub mod config;
pub mod output;
pub mod select;

use std::fmt;

use config::{Command, RunConfig};
use output::Document;

/// Process exit statuses.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const COMPOSITE: i32 = 1;
    pub const INCONCLUSIVE: i32 = 2;
    pub const CONDITIONAL: i32 = 3;
    pub const COUNTEREXAMPLE: i32 = 10;
    pub const USAGE: i32 = 64;
}

/// Bad input: the run never started.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit: i32,
    pub document: Document,
    pub text: String,
    /// Replayable record of a counterexample or invariant violation.
    pub dump: Option<serde_json::Value>,
}

impl Outcome {
    /// What goes to stdout for the configured format.
    pub fn render(&self, cfg: &RunConfig) -> String {
        match cfg.global.format {
            config::Format::Json => self.document.to_json() + "\n",
            config::Format::Text => self.text.clone(),
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, UsageError> {
    if cfg.global.base_search_limit < 2 {
        return Err(UsageError("--base-search-limit must be at least 2".into()));
    }
    match &cfg.command {
        Command::Test(a) => commands::test(cfg, a),
        Command::Census(a) => commands::census(cfg, a),
        Command::Verify(a) => commands::verify(cfg, a),
        Command::Bench(a) => commands::bench(cfg, a),
    }
}

//! Command-line experiments for the fitness-landscape population model.
//!
//! Every command writes its data files plus a `manifest.json` into its
//! output directory; `replay` re-runs a manifest and reproduces the data
//! files byte for byte.

pub mod args;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod output;
pub mod parallel;

use std::path::PathBuf;
use std::time::Instant;

use serde_json::{Map, Value};

pub use args::{Cli, Command};
pub use error::{CliError, CliResult};
pub use manifest::{Manifest, MANIFEST_NAME};

use output::OutputDir;

/// What a command hands back besides its files.
#[derive(Debug, Default)]
pub struct Report {
    /// Free-form facts recorded under `notes` in the manifest.
    pub notes: Map<String, Value>,
    /// Set when a checked property failed; maps to exit code 1.
    pub violation: Option<String>,
    /// Human-readable summary for stdout.
    pub lines: Vec<String>,
}

impl Report {
    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.notes.insert(key.to_string(), value.into());
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub out_dir: PathBuf,
    pub manifest: Manifest,
    pub report: Report,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.violation.is_some() {
            1
        } else {
            0
        }
    }
}

/// Runs `command`, writes its manifest and returns the outcome.
pub fn execute(command: &Command, argv: &[String]) -> CliResult<Outcome> {
    if let Command::Replay(a) = command {
        let recorded = Manifest::read(&a.manifest)?;
        let mut inner = recorded.invocation.clone();
        if let Command::Replay(_) = inner {
            return Err(CliError::Usage("manifest records a replay".into()));
        }
        if let Some(dir) = &a.out {
            inner.set_out_dir(dir.clone());
        }
        return execute(&inner, argv);
    }
    let dir = command
        .out_dir()
        .expect("non-replay commands have an output directory");
    let mut out = OutputDir::create(dir)?;
    let started = Instant::now();
    let report = commands::dispatch(command, &mut out)?;
    let elapsed_ms = started.elapsed().as_millis() as u64;

    let params = match serde_json::to_value(command) {
        Ok(Value::Object(mut m)) if m.len() == 1 => m.remove(command.name()).unwrap_or(Value::Null),
        Ok(v) => v,
        Err(_) => Value::Null,
    };
    let (seed, replicates) = command.seeding();
    let manifest = Manifest {
        command: command.name().to_string(),
        params,
        seed,
        replicates,
        version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: out.written().to_vec(),
        elapsed_ms,
        argv: argv.to_vec(),
        notes: Value::Object(report.notes.clone()),
        invocation: command.clone(),
    };
    out.write_json(MANIFEST_NAME, &manifest)?;
    Ok(Outcome {
        out_dir: out.root().to_path_buf(),
        manifest,
        report,
    })
}

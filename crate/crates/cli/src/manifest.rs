use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::Command;
use crate::error::{CliError, CliResult};

pub const MANIFEST_NAME: &str = "manifest.json";

/// Run record written next to every command's outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    /// Fully resolved arguments of the command.
    pub params: Value,
    pub seed: Option<u64>,
    pub replicates: Option<u64>,
    pub version: String,
    pub outputs: Vec<String>,
    pub elapsed_ms: u64,
    pub argv: Vec<String>,
    #[serde(default)]
    pub notes: Value,
    /// Serialized command, sufficient to replay the run.
    pub invocation: Command,
}

impl Manifest {
    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: not a manifest: {e}", path.display())))
    }
}

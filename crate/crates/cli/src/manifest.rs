use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::Command;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything needed to reproduce an output directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub command: String,
    pub inputs: Vec<PathBuf>,
    pub seed: Option<u64>,
    pub out: PathBuf,
    /// Fully resolved command parameters, defaults included.
    pub parameters: Value,
}

impl RunManifest {
    pub fn for_command(command: &Command, inputs: Vec<PathBuf>, seed: Option<u64>, out: &Path) -> Result<Self> {
        let mut tagged = serde_json::to_value(command)?;
        let parameters = tagged
            .get_mut("parameters")
            .map(Value::take)
            .context("command has no parameters")?;
        Ok(Self {
            tool: format!("sateq {}", env!("CARGO_PKG_VERSION")),
            command: command.name().to_string(),
            inputs,
            seed,
            out: out.to_path_buf(),
            parameters,
        })
    }

    pub fn to_command(&self) -> Result<Command> {
        let tagged = json!({ "command": self.command, "parameters": self.parameters });
        serde_json::from_value(tagged).with_context(|| format!("manifest parameters do not fit `{}`", self.command))
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)? + "\n";
        fs::write(dir.join(MANIFEST_FILE), text).with_context(|| format!("writing manifest in {}", dir.display()))
    }
}

pub fn load(path: &Path) -> Result<Command> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let manifest: RunManifest =
        serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))?;
    if manifest.command == "replay" {
        bail!("a manifest cannot replay another replay");
    }
    manifest.to_command()
}

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::config::RunConfig;

/// Record of one command invocation, written next to its outputs.
#[derive(Debug, Clone, Default)]
pub struct Manifest {
    pub command: String,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            ..Default::default()
        }
    }

    pub fn render(&self, cfg: &RunConfig) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        let _ = writeln!(s, "config_sha256: {}", cfg.hash());
        for p in &self.inputs {
            let _ = writeln!(s, "input: {}", p.display());
        }
        for p in &self.outputs {
            let _ = writeln!(s, "output: {}", p.display());
        }
        let _ = writeln!(s, "\n# effective configuration\n{}", cfg.to_toml());
        s
    }

    /// Writes `manifest.txt` into `dir` and returns its path.
    pub fn write(&self, dir: &Path, cfg: &RunConfig) -> Result<PathBuf> {
        let path = dir.join("manifest.txt");
        std::fs::write(&path, self.render(cfg)).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

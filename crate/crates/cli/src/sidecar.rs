//! Run sidecars: every command writes its fully resolved configuration next
//! to its outputs, so any artifact can be reproduced from the sidecar alone
//! by re-invoking the recorded argv.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RunSidecar {
    /// Subcommand name.
    pub command: String,
    /// Canonical argv (defaults resolved) that reproduces the run.
    pub argv: Vec<String>,
    /// The same configuration as a sorted key-value map, for reading.
    pub config: BTreeMap<String, String>,
    /// Files the run wrote, relative to the working directory of the run.
    pub outputs: Vec<String>,
}

/// `<output>.run.json` for single-file outputs.
pub fn sidecar_path(primary_output: &Path) -> PathBuf {
    let mut s = primary_output.as_os_str().to_os_string();
    s.push(".run.json");
    PathBuf::from(s)
}

pub fn write_sidecar(path: &Path, sidecar: &RunSidecar) -> Result<()> {
    let json = serde_json::to_string_pretty(sidecar)
        .map_err(|e| CliError::Format(format!("encoding sidecar: {e}")))?;
    fs::write(path, json.as_bytes())
        .map_err(|e| CliError::io(&format!("writing {}", path.display()), e))
}

pub fn read_sidecar(path: &Path) -> Result<RunSidecar> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(&format!("reading {}", path.display()), e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Format(format!("{}: invalid sidecar: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_path_appends_suffix() {
        assert_eq!(
            sidecar_path(Path::new("out/echo.cf64")),
            PathBuf::from("out/echo.cf64.run.json")
        );
    }
}

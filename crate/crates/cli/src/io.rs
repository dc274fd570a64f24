use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Reads and parses a JSON file. Parse errors carry the line, the column
/// and, for schema violations, the name of the offending field.
pub fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {what} file {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid {what} file {}", path.display()))
}

pub fn required<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    match path {
        Some(p) => Ok(p),
        None => bail!("missing required flag --{flag}"),
    }
}

/// Wraps a result with the tool version and the resolved configuration.
pub fn envelope(command: &str, config: Value, result: impl Serialize) -> Result<Value> {
    Ok(json!({
        "tool": "marc",
        "version": VERSION,
        "command": command,
        "config": config,
        "result": serde_json::to_value(result)?,
    }))
}

pub struct Output {
    dir: Option<PathBuf>,
}

impl Output {
    pub fn new(dir: Option<PathBuf>) -> Result<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d)
                .with_context(|| format!("cannot create output directory {}", d.display()))?;
        }
        Ok(Output { dir })
    }

    pub fn json(&self, name: &str, value: &Value) -> Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let path = dir.join(name);
        fs::write(&path, serde_json::to_string_pretty(value)? + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?;
        println!("report: {}", path.display());
        Ok(())
    }

    /// Writes rows of serializable records as CSV. Needs an output
    /// directory.
    pub fn csv<R: Serialize>(&self, name: &str, rows: impl IntoIterator<Item = R>) -> Result<()> {
        let Some(dir) = &self.dir else {
            bail!("--csv needs an output directory (--out)");
        };
        let path = dir.join(name);
        let mut w = csv::Writer::from_path(&path)
            .with_context(|| format!("cannot write {}", path.display()))?;
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        println!("csv: {}", path.display());
        Ok(())
    }
}

//! Reports cached on disk, one JSON file per command and parameter set.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;

use crate::report::{Report, SCHEMA_VERSION};
use crate::Command;

/// File stem for a command: its parameters plus the crate and schema versions.
pub fn key(command: &Command, force: bool) -> String {
    let raw = format!("{command:?}-force{force}-v{}-s{SCHEMA_VERSION}", env!("CARGO_PKG_VERSION"));
    raw.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect::<String>()
        .split('_')
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>()
        .join("_")
}

fn path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.json"))
}

pub fn load(dir: &Path, key: &str) -> anyhow::Result<Option<Report>> {
    let p = path(dir, key);
    if !p.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
    // unreadable entries are treated as misses and overwritten
    Ok(serde_json::from_str(&text).ok().and_then(|v| Report::from_value(&v)))
}

pub fn store(dir: &Path, key: &str, report: &Report) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let p = path(dir, key);
    // write then rename so a concurrent reader never sees a partial file
    let tmp = dir.join(format!("{key}.json.tmp{}", std::process::id()));
    fs::write(&tmp, serde_json::to_string(&report.to_value())?)?;
    fs::rename(&tmp, &p).with_context(|| format!("writing {}", p.display()))?;
    Ok(())
}

//! One JSON file per (command, prime, seed, params, version) key.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::report::Report;

pub const ENV_VAR: &str = "SYZYGY_CACHE";

/// The environment variable wins over the flag; no directory means no cache.
pub fn resolve_dir(flag: Option<&Path>) -> Option<PathBuf> {
    match std::env::var_os(ENV_VAR) {
        Some(v) if !v.is_empty() => Some(PathBuf::from(v)),
        _ => flag.map(Path::to_path_buf),
    }
}

pub fn key(command: &str, prime: u64, seed: u64, params: &Map<String, Value>) -> String {
    let material = json!({
        "command": command,
        "prime": prime,
        "seed": seed,
        "params": params,
        "version": env!("CARGO_PKG_VERSION"),
    });
    hex::encode(Sha256::digest(material.to_string().as_bytes()))
}

pub fn load(dir: &Path, key: &str) -> Option<Report> {
    let text = fs::read_to_string(dir.join(format!("{key}.json"))).ok()?;
    let mut report: Report = serde_json::from_str(&text).ok()?;
    report.cached = true;
    Some(report)
}

/// Write to a temporary file in the same directory, then rename into place.
pub fn store(dir: &Path, key: &str, report: &Report) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(report.json().as_bytes())?;
    tmp.flush()?;
    tmp.persist(dir.join(format!("{key}.json")))
        .map_err(|e| e.error)?;
    Ok(())
}

//! CSV and JSON writers; every file carries the config hash.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use super::CliError;

fn write(dir: &Path, name: &str, body: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, body).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Header comment with the hash, one header row, then the rows.
pub fn write_csv(dir: &Path, name: &str, hash: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut s = format!("# config_sha256: {hash}\n{}\n", header.join(","));
    for r in rows {
        let _ = writeln!(s, "{}", r.join(","));
    }
    write(dir, name, &s)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    write(dir, name, &s)
}

pub fn num(v: f64) -> String {
    // no "-0" in the tables
    format!("{}", if v == 0.0 { 0.0 } else { v })
}

//! JSON files for instances and schedules.

use std::fs;
use std::path::{Path, PathBuf};

use curing_core::{Instance, InstanceSpec, Schedule};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    Fs { path: PathBuf, source: std::io::Error },
    #[error("{}:{line}:{column}: {msg}", path.display())]
    Json { path: PathBuf, line: usize, column: usize, msg: String },
    #[error("{}: {source}", path.display())]
    Instance { path: PathBuf, source: curing_core::Error },
}

fn json_error(path: &Path, e: serde_json::Error) -> IoError {
    // serde appends " at line L column C"; keep only the message part
    let full = e.to_string();
    let msg = match full.rfind(" at line ") {
        Some(i) => full[..i].to_string(),
        None => full,
    };
    IoError::Json { path: path.to_path_buf(), line: e.line(), column: e.column(), msg }
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Fs { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), IoError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| IoError::Fs { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, text).map_err(|source| IoError::Fs { path: path.to_path_buf(), source })
}

pub fn parse_instance_spec(text: &str, path: &Path) -> Result<InstanceSpec, IoError> {
    serde_json::from_str(text).map_err(|e| json_error(path, e))
}

pub fn read_instance_spec(path: &Path) -> Result<InstanceSpec, IoError> {
    parse_instance_spec(&read(path)?, path)
}

/// Reads and checks an instance file. Problems with the data itself (unknown
/// ids, duplicates) are reported against the file path.
pub fn read_instance(path: &Path) -> Result<Instance, IoError> {
    let spec = read_instance_spec(path)?;
    Instance::new(spec).map_err(|source| IoError::Instance { path: path.to_path_buf(), source })
}

pub fn instance_to_json(spec: &InstanceSpec) -> String {
    let mut s = serde_json::to_string_pretty(spec).expect("instance specs always serialize");
    s.push('\n');
    s
}

pub fn write_instance(path: &Path, spec: &InstanceSpec) -> Result<(), IoError> {
    write(path, &instance_to_json(spec))
}

pub fn read_schedule(path: &Path) -> Result<Schedule, IoError> {
    serde_json::from_str(&read(path)?).map_err(|e| json_error(path, e))
}

pub fn schedule_to_json(s: &Schedule) -> String {
    let mut out = serde_json::to_string_pretty(&s.sorted()).expect("schedules always serialize");
    out.push('\n');
    out
}

pub fn write_schedule(path: &Path, s: &Schedule) -> Result<(), IoError> {
    write(path, &schedule_to_json(s))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    write(path, text)
}

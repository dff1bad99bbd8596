//! One-record-per-line UTF-8 JSON files used for every pipeline artifact.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonlError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Schema { path: PathBuf, line: usize, message: String },
}

impl JsonlError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        JsonlError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Serializes records, one per line, with a trailing newline.
pub fn to_string<T: Serialize>(records: &[T]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("records serialize"));
        out.push('\n');
    }
    out
}

/// Parses records from text, keeping each record's 1-based line number.
/// Blank lines are skipped; `origin` names the source in error messages.
pub fn from_str_numbered<T: DeserializeOwned>(text: &str, origin: &Path) -> Result<Vec<(usize, T)>, JsonlError> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            serde_json::from_str(line)
                .map(|record| (i + 1, record))
                .map_err(|e| schema(origin, i + 1, e.to_string()))
        })
        .collect()
}

pub fn from_str<T: DeserializeOwned>(text: &str, origin: &Path) -> Result<Vec<T>, JsonlError> {
    Ok(from_str_numbered(text, origin)?.into_iter().map(|(_, r)| r).collect())
}

pub fn schema(path: &Path, line: usize, message: impl Into<String>) -> JsonlError {
    JsonlError::Schema {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

pub fn read_text(path: &Path) -> Result<String, JsonlError> {
    fs::read_to_string(path).map_err(|e| JsonlError::io(path, e))
}

pub fn read_numbered<T: DeserializeOwned>(path: &Path) -> Result<Vec<(usize, T)>, JsonlError> {
    from_str_numbered(&read_text(path)?, path)
}

pub fn read<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, JsonlError> {
    from_str(&read_text(path)?, path)
}

pub fn write<T: Serialize>(path: &Path, records: &[T]) -> Result<(), JsonlError> {
    let mut file = fs::File::create(path).map_err(|e| JsonlError::io(path, e))?;
    file.write_all(to_string(records).as_bytes())
        .map_err(|e| JsonlError::io(path, e))
}

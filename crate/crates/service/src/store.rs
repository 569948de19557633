//! Append-only JSONL journal of session events.

use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use parking_lot::Mutex;

use crate::session::Event;

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("journal {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("journal {path} line {line}: {message}")]
    Corrupt { path: String, line: usize, message: String },
}

#[derive(Debug)]
pub struct EventStore {
    path: PathBuf,
    file: Mutex<File>,
}

impl EventStore {
    /// Opens `path` for appending, creating it if needed, and returns the
    /// events already in it. A torn last line (crash mid-write) is dropped.
    pub fn open(path: &Path) -> Result<(EventStore, Vec<Event>), StoreError> {
        let io = |source| StoreError::Io {
            path: path.display().to_string(),
            source,
        };
        let mut events = Vec::new();
        let mut valid_len = None;
        if path.exists() {
            let text = std::fs::read_to_string(path).map_err(io)?;
            let mut offset = 0;
            let lines: Vec<&str> = text.split_inclusive('\n').collect();
            for (i, line) in lines.iter().enumerate() {
                let start = offset;
                offset += line.len();
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str(line) {
                    Ok(e) => events.push(e),
                    Err(_) if i + 1 == lines.len() => valid_len = Some(start as u64),
                    Err(e) => {
                        return Err(StoreError::Corrupt {
                            path: path.display().to_string(),
                            line: i + 1,
                            message: e.to_string(),
                        })
                    }
                }
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
        if let Some(len) = valid_len {
            file.set_len(len).map_err(io)?;
        }
        Ok((
            EventStore {
                path: path.to_path_buf(),
                file: Mutex::new(file),
            },
            events,
        ))
    }

    pub fn append(&self, event: &Event) -> Result<(), StoreError> {
        let mut line = serde_json::to_string(event).expect("events serialise");
        line.push('\n');
        let mut f = self.file.lock();
        f.write_all(line.as_bytes())
            .and_then(|()| f.flush())
            .map_err(|source| StoreError::Io {
                path: self.path.display().to_string(),
                source,
            })
    }
}

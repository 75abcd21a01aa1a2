//! JSON and CSV artifact writers. Every file carries the schema version and
//! the resolved run configuration.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct JsonArtifact<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    config: &'a Value,
    #[serde(flatten)]
    result: &'a T,
}

pub struct ArtifactWriter {
    pub dir: PathBuf,
    command: String,
    config: Value,
    pub written: Vec<PathBuf>,
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.to_path_buf(), source }
}

impl ArtifactWriter {
    pub fn create(dir: &Path, command: &str, config: Value) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        Ok(Self { dir: dir.to_path_buf(), command: command.into(), config, written: Vec::new() })
    }

    pub fn json<T: Serialize>(&mut self, name: &str, result: &T) -> Result<PathBuf> {
        let path = self.dir.join(name);
        let doc = JsonArtifact { schema_version: SCHEMA_VERSION, command: &self.command, config: &self.config, result };
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| io_err(&path, e))?;
        self.written.push(path.clone());
        Ok(path)
    }

    /// CSV with `#`-prefixed header lines holding the schema version and
    /// the configuration.
    pub fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        let mut buf = Vec::new();
        writeln!(buf, "# schema_version: {SCHEMA_VERSION}").unwrap();
        writeln!(buf, "# command: {}", self.command).unwrap();
        writeln!(buf, "# config: {}", serde_json::to_string(&self.config)?).unwrap();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush().map_err(|e| io_err(&path, e))?;
        }
        std::fs::write(&path, buf).map_err(|e| io_err(&path, e))?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn record(&mut self, path: PathBuf) {
        self.written.push(path);
    }
}

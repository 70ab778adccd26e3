//! CSV artifacts with manifest headers, and the per-run manifest file.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

pub const TOOL: &str = "pgrand";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct FileRecord {
    pub name: String,
    pub sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
}

/// What a finished command produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: &'static str,
    pub config_hash: String,
    pub files: Vec<PathBuf>,
    pub manifest: PathBuf,
    pub warnings: Vec<String>,
}

/// Collects the artifacts of one command invocation.
#[derive(Debug)]
pub struct Run {
    command: &'static str,
    out_dir: PathBuf,
    settings: Map<String, Value>,
    hash: String,
    workers: usize,
    files: Vec<FileRecord>,
    paths: Vec<PathBuf>,
    notes: Map<String, Value>,
    warnings: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Run {
    /// `settings` are the fully resolved parameters; their hash tags every artifact.
    pub fn new(command: &'static str, out_dir: &Path, settings: impl Serialize, workers: usize) -> anyhow::Result<Self> {
        let Value::Object(settings) = serde_json::to_value(settings)? else {
            anyhow::bail!("settings must serialize to a map");
        };
        let canonical = serde_json::to_vec(&Value::Object(settings.clone()))?;
        let hash = sha256_hex(&[command.as_bytes(), b"\n", &canonical].concat());
        fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
        Ok(Self {
            command,
            out_dir: out_dir.to_path_buf(),
            settings,
            hash,
            workers,
            files: Vec::new(),
            paths: Vec::new(),
            notes: Map::new(),
            warnings: Vec::new(),
        })
    }

    pub fn config_hash(&self) -> &str {
        &self.hash
    }

    pub fn out_dir(&self) -> &Path {
        &self.out_dir
    }

    fn header(&self) -> String {
        let mut h = format!("# {TOOL} {VERSION} {}\n# config-sha256: {}\n", self.command, self.hash);
        for (k, v) in &self.settings {
            h.push_str(&format!("# {k}={v}\n"));
        }
        h
    }

    /// Writes `<out>/<name>.csv`.
    pub fn csv<I>(&mut self, name: &str, columns: &str, rows: I) -> anyhow::Result<PathBuf>
    where
        I: IntoIterator<Item = String>,
    {
        let mut text = self.header();
        text.push_str(columns);
        text.push('\n');
        let mut count = 0;
        for row in rows {
            text.push_str(&row);
            text.push('\n');
            count += 1;
        }
        let path = self.out_dir.join(format!("{name}.csv"));
        fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(FileRecord {
            name: format!("{name}.csv"),
            sha256: sha256_hex(text.as_bytes()),
            rows: Some(count),
        });
        self.paths.push(path.clone());
        Ok(path)
    }

    /// Registers a file written elsewhere (lookup tables).
    pub fn record(&mut self, path: &Path) -> anyhow::Result<()> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.files.push(FileRecord {
            name: path.file_name().map_or_else(String::new, |s| s.to_string_lossy().into_owned()),
            sha256: sha256_hex(&bytes),
            rows: None,
        });
        self.paths.push(path.to_path_buf());
        Ok(())
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) -> anyhow::Result<()> {
        self.notes.insert(key.to_string(), serde_json::to_value(value)?);
        Ok(())
    }

    /// Non-fatal condition, echoed to stderr and kept in the manifest.
    pub fn warn(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        eprintln!("warning: {msg}");
        self.warnings.push(msg);
    }

    pub fn finish(self) -> anyhow::Result<Outcome> {
        let manifest = serde_json::json!({
            "tool": TOOL,
            "version": VERSION,
            "command": self.command,
            "config_sha256": self.hash,
            "parameters": self.settings,
            "workers": self.workers,
            "files": self.files,
            "notes": self.notes,
            "warnings": self.warnings,
        });
        let path = self.out_dir.join(format!("{}.manifest.json", self.command));
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(Outcome {
            command: self.command,
            config_hash: self.hash,
            files: self.paths,
            manifest: path,
            warnings: self.warnings,
        })
    }
}

/// Empty cell for missing values.
pub fn cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

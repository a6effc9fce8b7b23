//! Append-only JSON-lines cache of `b_m` reports.
//!
//! One entry per line; on key collision the last line wins. Any number of
//! processes may read the file but only one may append at a time.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bm::{bm_report, BmReport};
use crate::cmfield::{CmField, Mode};
use crate::error::{Error, Result};

/// Bumped whenever the report format or the evaluation changes.
pub const CACHE_VERSION: &str = "cmint-bm-1";
pub const CACHE_FILE: &str = "bm-cache.jsonl";
pub const CACHE_DIR_VAR: &str = "CMINT_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    #[serde(rename = "D")]
    pub d: u64,
    pub x: i128,
    pub y: i128,
    pub den: i128,
    pub mode: Mode,
    pub m: u64,
}

impl CacheKey {
    pub fn new(field: &CmField, m: u64) -> Self {
        CacheKey {
            d: field.d,
            x: field.delta.x,
            y: field.delta.y,
            den: field.delta.den,
            mode: field.mode,
            m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub version: String,
    pub key: CacheKey,
    pub report: BmReport,
}

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    entries: HashMap<CacheKey, BmReport>,
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Resource(format!("cache file {}: {e}", path.display()))
}

/// `$CMINT_CACHE_DIR`, else the platform cache directory.
pub fn default_dir() -> Option<PathBuf> {
    match std::env::var_os(CACHE_DIR_VAR) {
        Some(dir) => Some(PathBuf::from(dir)),
        None => dirs::cache_dir().map(|d| d.join("cmint")),
    }
}

impl Cache {
    /// Opens (without creating) the cache in `dir`. Lines that fail to parse
    /// or carry another version are skipped.
    pub fn open(dir: &Path) -> Result<Self> {
        let path = dir.join(CACHE_FILE);
        let mut entries = HashMap::new();
        if path.exists() {
            let file = File::open(&path).map_err(|e| io_err(&path, e))?;
            for line in BufReader::new(file).lines() {
                let line = line.map_err(|e| io_err(&path, e))?;
                if let Ok(entry) = serde_json::from_str::<CacheEntry>(&line) {
                    if entry.version == CACHE_VERSION {
                        entries.insert(entry.key, entry.report);
                    }
                }
            }
        }
        Ok(Cache { path, entries })
    }

    pub fn open_default() -> Result<Self> {
        let dir = default_dir().ok_or_else(|| Error::Resource("no cache directory available".into()))?;
        Self::open(&dir)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &CacheKey) -> Option<&BmReport> {
        self.entries.get(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &CacheKey> {
        self.entries.keys()
    }

    pub fn insert(&mut self, key: CacheKey, report: BmReport) -> Result<()> {
        if let Some(dir) = self.path.parent() {
            fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        }
        let entry = CacheEntry { version: CACHE_VERSION.into(), key, report };
        let mut line = serde_json::to_string(&entry).map_err(|e| Error::Internal(e.to_string()))?;
        line.push('\n');
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| io_err(&self.path, e))?;
        file.write_all(line.as_bytes()).map_err(|e| io_err(&self.path, e))?;
        self.entries.insert(entry.key, entry.report);
        Ok(())
    }

    /// Cached report if present, otherwise computed and appended.
    pub fn report(&mut self, field: &CmField, m: u64) -> Result<BmReport> {
        let key = CacheKey::new(field, m);
        if let Some(r) = self.get(&key) {
            return Ok(r.clone());
        }
        let r = bm_report(field, m)?;
        self.insert(key, r.clone())?;
        Ok(r)
    }
}

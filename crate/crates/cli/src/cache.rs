//! JSON-lines result cache. One entry per line; the last entry for a key wins.

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use zslab::constants::{ConstantKind, ConstantResult};
use zslab::WeightSetSpec;

pub const CACHE_ENV: &str = "ZSLAB_CACHE";

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub kind: ConstantKind,
    pub n: u64,
    /// Canonical weight-spec string.
    pub weights: String,
}

impl CacheKey {
    pub fn new(kind: ConstantKind, n: u64, spec: &WeightSetSpec) -> Self {
        Self {
            kind,
            n,
            weights: spec.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Predicted,
    Exhaustive,
    /// Both values were computed and agree.
    Verified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub result: ConstantResult,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<u64>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl CacheEntry {
    pub fn new(result: ConstantResult, provenance: Provenance, predicted: Option<u64>, exhaustive: Option<u64>) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        Self {
            key: CacheKey::new(result.kind, result.n, &result.weights),
            result,
            provenance,
            predicted,
            exhaustive,
            timestamp,
        }
    }

    /// Usable as an exhaustive answer.
    pub fn is_exact(&self) -> bool {
        matches!(self.provenance, Provenance::Exhaustive | Provenance::Verified)
    }
}

pub struct Cache {
    path: PathBuf,
}

impl Cache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self { path: path.into() }
    }

    /// `$ZSLAB_CACHE`, else `$XDG_CACHE_HOME/zslab/results.jsonl`, else
    /// `~/.cache/zslab/results.jsonl`.
    pub fn default_path() -> PathBuf {
        if let Some(p) = std::env::var_os(CACHE_ENV) {
            return PathBuf::from(p);
        }
        let base = std::env::var_os("XDG_CACHE_HOME")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| Path::new(&h).join(".cache")))
            .unwrap_or_else(|| PathBuf::from("."));
        base.join("zslab").join("results.jsonl")
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Latest entry for `key` satisfying `accept`. Malformed lines are skipped.
    pub fn lookup(&self, key: &CacheKey, accept: impl Fn(&CacheEntry) -> bool) -> io::Result<Option<CacheEntry>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e),
        };
        file.lock_shared()?;
        let mut found = None;
        for line in BufReader::new(&file).lines() {
            let line = line?;
            if let Ok(entry) = serde_json::from_str::<CacheEntry>(&line) {
                if &entry.key == key && accept(&entry) {
                    found = Some(entry);
                }
            }
        }
        Ok(found)
    }

    /// Append one entry under an exclusive lock.
    pub fn append(&self, entry: &CacheEntry) -> io::Result<()> {
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        file.lock()?;
        let mut line = serde_json::to_string(entry).expect("entry serializes");
        line.push('\n');
        file.write_all(line.as_bytes())?;
        file.flush()
    }
}

//! One JSON file per result, keyed by a SHA-256 of the request.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub operation: String,
    pub toolkit_version: String,
    pub payload: Value,
}

pub struct Cache {
    dir: PathBuf,
    verify: bool,
}

/// Hex digest of the canonical (sorted-key, compact) request JSON.
pub fn cache_key(operation: &str, surface: &Value, params: &Value) -> String {
    let request = json!({ "operation": operation, "surface": surface, "params": params });
    let digest = Sha256::digest(request.to_string().as_bytes());
    hex::encode(digest)
}

impl Cache {
    pub fn new(dir: PathBuf, verify: bool) -> Self {
        Cache { dir, verify }
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    fn load(&self, path: &Path) -> Option<CacheEntry> {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return None,
            Err(e) => {
                eprintln!("warning: cannot read cache file {}: {e}; recomputing", path.display());
                return None;
            }
        };
        match serde_json::from_str::<CacheEntry>(&text) {
            Ok(entry) => Some(entry),
            Err(e) => {
                eprintln!("warning: corrupt cache file {}: {e}; recomputing", path.display());
                None
            }
        }
    }

    fn store(&self, entry: &CacheEntry) -> Result<(), CliError> {
        std::fs::create_dir_all(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        let text = serde_json::to_string_pretty(entry).map_err(CliError::internal)?;
        tmp.write_all(text.as_bytes()).map_err(|e| CliError::io(tmp.path(), e))?;
        let path = self.path_for(&entry.key);
        tmp.persist(&path).map_err(|e| CliError::io(&path, e.error))?;
        Ok(())
    }

    pub fn get_or_compute(
        &self,
        operation: &str,
        surface: &Value,
        params: &Value,
        compute: impl FnOnce() -> Result<Value, CliError>,
    ) -> Result<Value, CliError> {
        let key = cache_key(operation, surface, params);
        let path = self.path_for(&key);
        let hit = self
            .load(&path)
            .filter(|e| e.key == key && e.operation == operation && e.toolkit_version == TOOLKIT_VERSION);
        if let Some(entry) = hit {
            if self.verify {
                let fresh = compute()?;
                if fresh != entry.payload {
                    let mut diffs = Vec::new();
                    diff(&entry.payload, &fresh, "$", &mut diffs);
                    return Err(CliError::new(
                        "CacheMismatch",
                        format!("cached result {} differs from a fresh computation: {}", path.display(), diffs.join("; ")),
                    ));
                }
            }
            return Ok(entry.payload);
        }
        let payload = compute()?;
        let entry = CacheEntry {
            key,
            operation: operation.to_string(),
            toolkit_version: TOOLKIT_VERSION.to_string(),
            payload,
        };
        self.store(&entry)?;
        Ok(entry.payload)
    }
}

const MAX_DIFFS: usize = 20;

fn diff(cached: &Value, fresh: &Value, path: &str, out: &mut Vec<String>) {
    if out.len() >= MAX_DIFFS || cached == fresh {
        return;
    }
    match (cached, fresh) {
        (Value::Object(a), Value::Object(b)) => {
            let keys: std::collections::BTreeSet<&String> = a.keys().chain(b.keys()).collect();
            for k in keys {
                match (a.get(k), b.get(k)) {
                    (Some(x), Some(y)) => diff(x, y, &format!("{path}.{k}"), out),
                    _ => out.push(format!("{path}.{k}: present on one side only")),
                }
            }
        }
        (Value::Array(a), Value::Array(b)) if a.len() == b.len() => {
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                diff(x, y, &format!("{path}[{i}]"), out);
            }
        }
        _ => out.push(format!("{path}: cached {cached} vs fresh {fresh}")),
    }
}

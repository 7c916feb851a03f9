//! On-disk result cache keyed by module, parameters and crate version.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const CACHE_ENV: &str = "VIRCAT_CACHE_DIR";
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o at {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cache serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub module: String,
    pub params: String,
    pub version: String,
}

impl CacheKey {
    pub fn new(module: &str, params: &str) -> Self {
        Self::with_version(module, params, CODE_VERSION)
    }

    pub fn with_version(module: &str, params: &str, version: &str) -> Self {
        CacheKey { module: module.into(), params: params.into(), version: version.into() }
    }

    pub fn file_name(&self) -> String {
        let clean = |s: &str| -> String {
            s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '_' { c } else { '-' }).collect()
        };
        format!("{}__{}__v{}.json", clean(&self.module), clean(&self.params), clean(&self.version))
    }
}

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    key: CacheKey,
    payload: T,
}

fn key_lock(path: &Path) -> Arc<Mutex<()>> {
    static LOCKS: OnceLock<Mutex<HashMap<PathBuf, Arc<Mutex<()>>>>> = OnceLock::new();
    let mut map = LOCKS.get_or_init(Default::default).lock().unwrap_or_else(|e| e.into_inner());
    map.entry(path.to_path_buf()).or_default().clone()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: Some(dir.into()) }
    }

    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    /// `$VIRCAT_CACHE_DIR`, else `vircat-cache` under the system temp directory.
    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Cache::at(d),
            _ => Cache::at(std::env::temp_dir().join("vircat-cache")),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn path(&self, key: &CacheKey) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(key.file_name()))
    }

    /// `Ok(None)` when absent; a corrupt or mismatched entry is reported as an error.
    pub fn load<T: DeserializeOwned>(&self, key: &CacheKey) -> Result<Option<T>, CacheError> {
        let Some(path) = self.path(key) else { return Ok(None) };
        let lock = key_lock(&path);
        let _g = lock.lock().unwrap_or_else(|e| e.into_inner());
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(source) => return Err(CacheError::Io { path, source }),
        };
        let env: Envelope<T> = serde_json::from_slice(&bytes)?;
        if env.key != *key {
            return Err(CacheError::Serde(serde::de::Error::custom("key mismatch")));
        }
        Ok(Some(env.payload))
    }

    /// Writes to a temporary sibling and renames it into place.
    pub fn store<T: Serialize>(&self, key: &CacheKey, value: &T) -> Result<(), CacheError> {
        let Some(path) = self.path(key) else { return Ok(()) };
        let dir = path.parent().expect("cache paths have a parent").to_path_buf();
        let io = |p: &Path| {
            let p = p.to_path_buf();
            move |source| CacheError::Io { path: p, source }
        };
        fs::create_dir_all(&dir).map_err(io(&dir))?;
        let lock = key_lock(&path);
        let _g = lock.lock().unwrap_or_else(|e| e.into_inner());
        let bytes = serde_json::to_vec(&Envelope { key: key.clone(), payload: value })?;
        let tmp = dir.join(format!(".{}.{}.tmp", key.file_name(), std::process::id()));
        let mut f = fs::File::create(&tmp).map_err(io(&tmp))?;
        f.write_all(&bytes).map_err(io(&tmp))?;
        f.sync_all().map_err(io(&tmp))?;
        fs::rename(&tmp, &path).map_err(io(&path))?;
        Ok(())
    }

    /// Loads `key` or computes and stores it; unreadable entries are recomputed with a warning.
    pub fn get_or_compute<T, E, F>(&self, key: &CacheKey, compute: F) -> Result<T, E>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T, E>,
    {
        match self.load(key) {
            Ok(Some(v)) => return Ok(v),
            Ok(None) => {}
            Err(e) => log::warn!("discarding cache entry {}: {e}", key.file_name()),
        }
        let v = compute()?;
        if let Err(e) = self.store(key, &v) {
            log::warn!("could not write cache entry {}: {e}", key.file_name());
        }
        Ok(v)
    }
}

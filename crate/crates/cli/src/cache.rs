//! Write-once cache files.
//!
//! Layout: `<dir>/v<VERSION>/<kind>/<key>.json`, each file an envelope
//! `{"version", "kind", "key", "data"}`. A file whose envelope does not match
//! is ignored and rewritten. Writes go through a temporary file and a rename,
//! so concurrent workers never observe a half-written entry.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const CACHE_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "FMKERNEL_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    version: u32,
    kind: String,
    key: String,
    data: T,
}

#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path(&self, kind: &str, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("v{CACHE_VERSION}")).join(kind).join(format!("{key}.json")))
    }

    pub fn load<T: DeserializeOwned>(&self, kind: &str, key: &str) -> Option<T> {
        let text = fs::read_to_string(self.path(kind, key)?).ok()?;
        let env: Envelope<T> = serde_json::from_str(&text).ok()?;
        (env.version == CACHE_VERSION && env.kind == kind && env.key == key).then_some(env.data)
    }

    pub fn store<T: Serialize>(&self, kind: &str, key: &str, data: &T) -> Result<()> {
        let Some(path) = self.path(kind, key) else { return Ok(()) };
        let parent = path.parent().expect("cache path has a parent");
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        let env = Envelope { version: CACHE_VERSION, kind: kind.to_string(), key: key.to_string(), data };
        let text = serde_json::to_string_pretty(&env).expect("cache entries serialize");
        let tmp = parent.join(format!(
            ".{key}.{}.{}.tmp",
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        fs::write(&tmp, text).map_err(|e| CliError::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| CliError::io(&path, e))
    }

    /// Cached value or `compute`, stored on a miss.
    pub fn get_or_compute<T, F>(&self, kind: &str, key: &str, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        if let Some(v) = self.load(kind, key) {
            return Ok(v);
        }
        let v = compute()?;
        self.store(kind, key, &v)?;
        Ok(v)
    }
}

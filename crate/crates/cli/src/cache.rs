//! Content-addressed store under `ICOSA_CACHE_DIR`.
//!
//! Objects live at `objects/<sha256>.json`; small index files under
//! `index/<kind>/<key>` hold the hash of the current object for a key.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

pub const ENV_VAR: &str = "ICOSA_CACHE_DIR";
pub const DEFAULT_DIR: &str = ".icosa-cache";

pub struct Cache {
    root: PathBuf,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let dir = path.parent().expect("cache paths have a parent");
    fs::create_dir_all(dir)?;
    let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos()).unwrap_or(0);
    let tmp = dir.join(format!(
        ".tmp-{}-{nanos}-{}",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    pub fn from_env() -> Self {
        Self::new(std::env::var_os(ENV_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_DIR)))
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn object_path(&self, hash: &str) -> PathBuf {
        self.root.join("objects").join(format!("{hash}.json"))
    }

    fn index_path(&self, kind: &str, key: &str) -> PathBuf {
        self.root.join("index").join(kind).join(key)
    }

    /// Stores `bytes` and points `kind/key` at them. Returns the hash.
    pub fn store(&self, kind: &str, key: &str, bytes: &[u8]) -> io::Result<String> {
        let hash = digest(bytes);
        let obj = self.object_path(&hash);
        if !obj.exists() {
            write_atomic(&obj, bytes)?;
        }
        write_atomic(&self.index_path(kind, key), hash.as_bytes())?;
        Ok(hash)
    }

    /// The object currently indexed under `kind/key`, if present and intact.
    pub fn load(&self, kind: &str, key: &str) -> Option<(String, Vec<u8>)> {
        let hash = fs::read_to_string(self.index_path(kind, key)).ok()?;
        let hash = hash.trim().to_string();
        let bytes = fs::read(self.object_path(&hash)).ok()?;
        (digest(&bytes) == hash).then_some((hash, bytes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scratch_dir(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("icosa-cache-test-{name}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        dir
    }

    #[test]
    fn store_and_load() {
        let dir = scratch_dir("roundtrip");
        let cache = Cache::new(&dir);
        assert!(cache.load("alpha", "doubles-m2").is_none());
        let h = cache.store("alpha", "doubles-m2", b"{\"a\":1}").unwrap();
        assert_eq!(h.len(), 64);
        let (h2, bytes) = cache.load("alpha", "doubles-m2").unwrap();
        assert_eq!(h, h2);
        assert_eq!(bytes, b"{\"a\":1}");
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn tampered_object_is_ignored() {
        let dir = scratch_dir("tamper");
        let cache = Cache::new(&dir);
        let h = cache.store("alpha", "k", b"original").unwrap();
        fs::write(cache.object_path(&h), b"changed").unwrap();
        assert!(cache.load("alpha", "k").is_none());
        fs::remove_dir_all(&dir).unwrap();
    }
}

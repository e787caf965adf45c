//! On-disk cache of invariant results: one JSON file per
//! `(canonical key, invariant, params)` under `ab/cd/<sha256>.json`.
//!
//! Writes go to a temporary file that is renamed into place, so readers
//! never see partial files; a racing writer with the same key simply wins.
//! Unreadable or malformed entries count as misses.

use crate::error::Result;
use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

static COUNTER: AtomicU64 = AtomicU64::new(0);

#[derive(Clone, Debug)]
pub struct Cache {
    root: PathBuf,
}

#[derive(Serialize, serde::Deserialize)]
struct Entry<T> {
    key: String,
    invariant: String,
    params: String,
    payload: T,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn path(&self, key: &str, invariant: &str, params: &str) -> PathBuf {
        let mut h = Sha256::new();
        for part in [key, invariant, params] {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part.as_bytes());
        }
        let digest = hex::encode(h.finalize());
        self.root.join(&digest[0..2]).join(&digest[2..4]).join(format!("{digest}.json"))
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str, invariant: &str, params: &str) -> Option<T> {
        let text = fs::read(self.path(key, invariant, params)).ok()?;
        let e: Entry<T> = serde_json::from_slice(&text).ok()?;
        (e.key == key && e.invariant == invariant && e.params == params).then_some(e.payload)
    }

    pub fn put<T: Serialize>(&self, key: &str, invariant: &str, params: &str, payload: &T) -> Result<()> {
        let path = self.path(key, invariant, params);
        let dir = path.parent().expect("cache paths have a parent");
        fs::create_dir_all(dir)?;
        let entry = Entry {
            key: key.to_string(),
            invariant: invariant.to_string(),
            params: params.to_string(),
            payload,
        };
        let tmp = dir.join(format!(
            ".{}.{}.{}.tmp",
            path.file_name().and_then(|s| s.to_str()).unwrap_or("entry"),
            std::process::id(),
            COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        fs::write(&tmp, serde_json::to_vec(&entry)?)?;
        if let Err(e) = fs::rename(&tmp, &path) {
            let _ = fs::remove_file(&tmp);
            return Err(e.into());
        }
        Ok(())
    }

    /// Cached value, or `compute` stored for next time. `accept` screens
    /// cached payloads (a rejected payload is recomputed).
    pub fn get_or_insert<T, F, A>(&self, key: &str, invariant: &str, params: &str, accept: A, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
        A: Fn(&T) -> bool,
    {
        if let Some(v) = self.get::<T>(key, invariant, params) {
            if accept(&v) {
                return Ok(v);
            }
        }
        let v = compute()?;
        self.put(key, invariant, params, &v)?;
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path());
        assert_eq!(c.get::<u32>("k", "alpha", ""), None);
        c.put("k", "alpha", "", &7u32).unwrap();
        assert_eq!(c.get::<u32>("k", "alpha", ""), Some(7));
        assert_eq!(c.get::<u32>("k", "alpha", "tol=1"), None);
        fs::write(c.path("k", "alpha", ""), b"{not json").unwrap();
        assert_eq!(c.get::<u32>("k", "alpha", ""), None);
        let v = c.get_or_insert("k", "alpha", "", |_| true, || Ok(9u32)).unwrap();
        assert_eq!(v, 9);
        assert_eq!(c.get::<u32>("k", "alpha", ""), Some(9));
    }

    #[test]
    fn concurrent_writers() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path());
        std::thread::scope(|s| {
            for i in 0..8u32 {
                let c = c.clone();
                s.spawn(move || {
                    for _ in 0..20 {
                        c.put("same", "x", "", &i).unwrap();
                        assert!(c.get::<u32>("same", "x", "").is_some_and(|v| v < 8));
                    }
                });
            }
        });
    }
}

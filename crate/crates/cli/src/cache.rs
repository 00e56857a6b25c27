//! On-disk cache of computed matrices, one JSON file per `(kind, n, m)`.
//!
//! Each file records the schema tag it was written under; files with any
//! other tag, or that fail to parse, are recomputed and overwritten.

use std::fs;
use std::path::{Path, PathBuf};

use fockdec::PolyMatrix;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: &str = concat!("fockdec-", env!("CARGO_PKG_VERSION"), "/matrix-v1");

pub const CACHE_ENV: &str = "FOCKDEC_CACHE";

const DEFAULT_DIR: &str = ".fockdec-cache";

/// `--cache-dir`, else `$FOCKDEC_CACHE`, else `./.fockdec-cache`.
pub fn resolve_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    match std::env::var_os(CACHE_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from(DEFAULT_DIR),
    }
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir: Some(dir) }
    }

    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn path(&self, kind: &str, n: usize, m: usize) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(format!("{kind}-n{n}-m{m}.json")))
    }

    pub fn load(&self, kind: &str, n: usize, m: usize) -> Option<PolyMatrix> {
        let text = fs::read_to_string(self.path(kind, n, m)?).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        if v.get("schema")?.as_str()? != SCHEMA_VERSION {
            return None;
        }
        let doc = v.get("matrix")?.to_string();
        let (dn, dm, matrix) = PolyMatrix::from_json(&doc).ok()?;
        (dn == n && dm == m).then_some(matrix)
    }

    /// Best effort: a cache that cannot be written is skipped with a warning.
    pub fn store(&self, kind: &str, n: usize, m: usize, matrix: &PolyMatrix) {
        let Some(path) = self.path(kind, n, m) else {
            return;
        };
        let body = json!({ "schema": SCHEMA_VERSION, "matrix": matrix.to_document(n, m) });
        let result = path
            .parent()
            .map_or(Ok(()), fs::create_dir_all)
            .and_then(|()| fs::write(&path, serde_json::to_string(&body).expect("serializable")));
        if let Err(e) = result {
            eprintln!(
                "warning: could not write cache file {}: {e}",
                path.display()
            );
        }
    }

    pub fn get_or_compute<E>(
        &self,
        kind: &str,
        n: usize,
        m: usize,
        compute: impl FnOnce() -> Result<PolyMatrix, E>,
    ) -> Result<PolyMatrix, E> {
        if let Some(hit) = self.load(kind, n, m) {
            return Ok(hit);
        }
        let fresh = compute()?;
        self.store(kind, n, m, &fresh);
        Ok(fresh)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fockdec::BarMatrix;

    #[test]
    fn round_trip_and_stale_entries() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().to_path_buf());
        let fresh = BarMatrix::compute(2, 3).unwrap().matrix;
        assert!(cache.load("bar", 2, 3).is_none());
        cache.store("bar", 2, 3, &fresh);
        assert_eq!(cache.load("bar", 2, 3).unwrap(), fresh);
        assert!(cache.load("bar", 2, 4).is_none());

        let path = cache.path("bar", 2, 3).unwrap();
        let text = fs::read_to_string(&path)
            .unwrap()
            .replace(SCHEMA_VERSION, "old-schema");
        fs::write(&path, text).unwrap();
        assert!(cache.load("bar", 2, 3).is_none());
        let again: Result<_, ()> = cache.get_or_compute("bar", 2, 3, || Ok(fresh.clone()));
        assert_eq!(again.unwrap(), fresh);
        assert_eq!(cache.load("bar", 2, 3).unwrap(), fresh);

        fs::write(&path, "not json").unwrap();
        assert!(cache.load("bar", 2, 3).is_none());
    }

    #[test]
    fn disabled_cache_always_computes() {
        let cache = Cache::disabled();
        let mut calls = 0;
        for _ in 0..2 {
            let _: Result<_, ()> = cache.get_or_compute("bar", 2, 2, || {
                calls += 1;
                Ok(BarMatrix::compute(2, 2).unwrap().matrix)
            });
        }
        assert_eq!(calls, 2);
    }
}

//! Optional persistence of linearization caches between runs.
//!
//! When `HYPERMOMENT_CACHE_DIR` is set, computed linearization measures are
//! written there as JSON keyed by hypergroup identity (catalog name, or a
//! hash of the custom spec) and reloaded on the next run. A missing,
//! corrupt, or structurally invalid cache file is ignored, never fatal:
//! entries are revalidated against the linearization invariants on load.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use hypermoment::{Hypergroup, Measure, RecurrenceSpec};

pub const CACHE_DIR_VAR: &str = "HYPERMOMENT_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    n: u32,
    m: u32,
    measure: Measure,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    entries: Vec<CacheEntry>,
}

/// A stable, filename-safe identity for a spec.
fn cache_key(spec: &RecurrenceSpec) -> String {
    if let Some(entry) = spec.catalog_entry() {
        return entry.name().to_string();
    }
    let canonical = serde_json::to_string(spec).expect("spec serialization cannot fail");
    let digest = Sha256::digest(canonical.as_bytes());
    let mut key = String::from("custom-");
    for byte in digest.iter().take(8) {
        key.push_str(&format!("{byte:02x}"));
    }
    key
}

fn cache_path(dir: &Path, spec: &RecurrenceSpec) -> PathBuf {
    dir.join(format!("{}.json", cache_key(spec)))
}

/// Preloads any valid persisted entries into the hypergroup's cache.
pub fn load(dir: &Path, hypergroup: &Hypergroup) {
    let path = cache_path(dir, hypergroup.spec());
    let Ok(text) = fs::read_to_string(&path) else {
        return;
    };
    let Ok(file) = serde_json::from_str::<CacheFile>(&text) else {
        eprintln!("warning: ignoring unreadable cache file {}", path.display());
        return;
    };
    for entry in file.entries {
        // preload_linearization rejects anything that breaks the invariants
        hypergroup.preload_linearization(entry.n, entry.m, entry.measure);
    }
}

/// Writes the current linearization cache back to disk.
pub fn save(dir: &Path, hypergroup: &Hypergroup) {
    let entries: Vec<CacheEntry> = hypergroup
        .cached_linearizations()
        .into_iter()
        .map(|(n, m, measure)| CacheEntry { n, m, measure })
        .collect();
    if entries.is_empty() {
        return;
    }
    if let Err(err) = fs::create_dir_all(dir) {
        eprintln!("warning: cannot create cache dir {}: {err}", dir.display());
        return;
    }
    let path = cache_path(dir, hypergroup.spec());
    let text = serde_json::to_string(&CacheFile { entries }).expect("cache serialization");
    if let Err(err) = fs::write(&path, text) {
        eprintln!("warning: cannot write cache file {}: {err}", path.display());
    }
}

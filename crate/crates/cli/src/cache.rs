//! Reachability caches persisted under `INTRICACY_CACHE_DIR`.
//!
//! Each shift gets one JSON file keyed by a hash of its adjacency matrix. The
//! file stores the adjacency itself, so a hash collision or a stale file is
//! detected and the cache is rebuilt. Cache problems are logged, never fatal.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::path::{Path, PathBuf};

use intricacy_core::linalg::BoolMatrix;
use intricacy_core::Sft;
use serde::{Deserialize, Serialize};

pub const CACHE_ENV: &str = "INTRICACY_CACHE_DIR";

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    adjacency: Vec<String>,
    reach: Vec<Vec<String>>,
}

fn encode(m: &BoolMatrix) -> Vec<String> {
    m.to_rows().iter().map(|r| r.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()).collect()
}

fn decode(rows: &[String]) -> Option<BoolMatrix> {
    let rows: Option<Vec<Vec<u8>>> = rows
        .iter()
        .map(|r| {
            r.chars()
                .map(|c| match c {
                    '0' => Some(0),
                    '1' => Some(1),
                    _ => None,
                })
                .collect()
        })
        .collect();
    BoolMatrix::from_rows(&rows?).ok()
}

fn cache_path(dir: &Path, adjacency: &[String]) -> PathBuf {
    let mut h = DefaultHasher::new();
    adjacency.hash(&mut h);
    dir.join(format!("reach-{}-{:016x}.json", adjacency.len(), h.finish()))
}

/// Install a persisted cache into `sft`, or persist the freshly built one.
/// Returns true when a cache was loaded.
pub fn attach(sft: &mut Sft) -> bool {
    match std::env::var_os(CACHE_ENV) {
        Some(dir) if !dir.is_empty() => attach_in(sft, Path::new(&dir)),
        _ => false,
    }
}

pub fn attach_in(sft: &mut Sft, dir: &Path) -> bool {
    let adjacency = encode(sft.adjacency());
    let path = cache_path(dir, &adjacency);
    if let Ok(text) = std::fs::read_to_string(&path) {
        match serde_json::from_str::<CacheFile>(&text) {
            Ok(file) if file.adjacency == adjacency => {
                let cache: Option<Vec<BoolMatrix>> = file.reach.iter().map(|m| decode(m)).collect();
                match cache.map(|c| sft.install_reach_cache(c)) {
                    Some(Ok(())) => {
                        log::debug!("loaded reachability cache {}", path.display());
                        return true;
                    }
                    _ => log::warn!("ignoring invalid reachability cache {}", path.display()),
                }
            }
            _ => log::warn!("ignoring mismatched reachability cache {}", path.display()),
        }
    }
    let file = CacheFile { adjacency, reach: sft.reach_cache().iter().map(encode).collect() };
    let write = || -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_vec(&file)?)?;
        std::fs::rename(&tmp, &path)
    };
    if let Err(e) = write() {
        log::warn!("could not write reachability cache {}: {e}", path.display());
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use intricacy_core::sft::examples::same_complexity_pair;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let [a, _] = same_complexity_pair();
        let mut first = a.clone();
        assert!(!attach_in(&mut first, dir.path()));
        let mut second = a.clone();
        assert!(attach_in(&mut second, dir.path()));
        assert_eq!(second.reach_cache(), a.reach_cache());
    }

    #[test]
    fn corrupt_file_is_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let [a, _] = same_complexity_pair();
        let path = cache_path(dir.path(), &encode(a.adjacency()));
        std::fs::write(&path, "not json").unwrap();
        let mut s = a.clone();
        assert!(!attach_in(&mut s, dir.path()));
        let mut t = a.clone();
        assert!(attach_in(&mut t, dir.path()));
    }
}

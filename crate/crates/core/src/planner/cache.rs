//! On-disk cache of the passage graph and hierarchy tables.
//!
//! The cache is a JSON sidecar keyed by the SHA-256 of the map file and the
//! raster resolution; any mismatch means the cache is stale. Rasters are not
//! stored; leaves are re-rasterized on demand.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::graph::PassageGraph;
use super::hierarchy::HierarchicalCostIndex;

/// Bumped whenever the file layout changes.
pub const CACHE_FORMAT: u32 = 1;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache file: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache file is not valid: {0}")]
    Format(#[from] serde_json::Error),
}

pub fn map_hash(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheFile {
    pub format: u32,
    pub map_sha256: String,
    pub resolution: f64,
    pub graph: PassageGraph,
    pub index: HierarchicalCostIndex,
}

impl CacheFile {
    pub fn new(map_bytes: &[u8], graph: PassageGraph, index: HierarchicalCostIndex) -> Self {
        CacheFile { format: CACHE_FORMAT, map_sha256: map_hash(map_bytes), resolution: graph.resolution, graph, index }
    }

    /// Whether this cache was built from `map_bytes` at `resolution`.
    pub fn is_fresh(&self, map_bytes: &[u8], resolution: f64) -> bool {
        self.format == CACHE_FORMAT && self.resolution == resolution && self.map_sha256 == map_hash(map_bytes)
    }

    pub fn save(&self, path: &Path) -> Result<(), CacheError> {
        let text = serde_json::to_vec(self)?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<CacheFile, CacheError> {
        let bytes = std::fs::read(path)?;
        Ok(serde_json::from_slice(&bytes)?)
    }

    /// Loads the cache if it exists and matches; `Ok(None)` when missing or
    /// stale.
    pub fn load_fresh(path: &Path, map_bytes: &[u8], resolution: f64) -> Result<Option<CacheFile>, CacheError> {
        if !path.exists() {
            return Ok(None);
        }
        let c = CacheFile::load(path)?;
        Ok(c.is_fresh(map_bytes, resolution).then_some(c))
    }
}

//! Fusion tables persisted as JSON, one file per `(r, ℓ)`.

use std::fs;
use std::path::{Path, PathBuf};

use parblocks_core::fusion::{FusionTable, LevelContext};
use parblocks_core::ranks::RankEngine;

use crate::error::{CliError, CliResult};
use crate::format::TableDoc;

fn io(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

#[derive(Debug, Clone)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    /// Creates the directory if needed and checks that it is writable.
    pub fn open(dir: impl Into<PathBuf>) -> CliResult<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| io(&dir, e))?;
        let probe = dir.join(".write-probe");
        fs::write(&probe, b"").map_err(|e| io(&dir, e))?;
        let _ = fs::remove_file(&probe);
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, ctx: LevelContext) -> PathBuf {
        self.dir.join(format!("fusion-r{}-level{}.json", ctx.rank, ctx.level))
    }

    /// The stored table, or an empty one when no file exists.
    pub fn load(&self, ctx: LevelContext) -> CliResult<FusionTable> {
        let path = self.path(ctx);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(FusionTable::new(ctx)),
            Err(e) => return Err(io(&path, e)),
        };
        let doc: TableDoc = serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("corrupt cache file {}: {e}", path.display())))?;
        if (doc.r, doc.level) != (ctx.rank, ctx.level) {
            return Err(CliError::Validation(format!(
                "cache file {} holds r={} level={}",
                path.display(),
                doc.r,
                doc.level
            )));
        }
        doc.to_table().map_err(|e| CliError::Validation(format!("corrupt cache file {}: {e}", path.display())))
    }

    /// Writes the table through a temporary file and a rename.
    pub fn store(&self, table: &FusionTable) -> CliResult<()> {
        let path = self.path(table.context());
        let tmp = path.with_extension("json.tmp");
        let text = serde_json::to_string(&TableDoc::from_table(table)).expect("table serializes");
        fs::write(&tmp, text).map_err(|e| io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| io(&path, e))
    }
}

/// A rank engine whose fusion table may come from and go back to disk.
pub struct CachedEngine {
    pub engine: RankEngine,
    cache: Option<TableCache>,
    loaded: usize,
}

impl CachedEngine {
    pub fn new(ctx: LevelContext, cache: Option<&TableCache>) -> CliResult<Self> {
        let table = match cache {
            Some(c) => c.load(ctx)?,
            None => FusionTable::new(ctx),
        };
        let loaded = table.stats().entries;
        Ok(Self { engine: RankEngine::with_table(table), cache: cache.cloned(), loaded })
    }

    /// Entries read from disk.
    pub fn loaded(&self) -> usize {
        self.loaded
    }

    /// Saves the table if it grew.
    pub fn persist(&self) -> CliResult<()> {
        match &self.cache {
            Some(c) if self.engine.stats().entries > self.loaded => c.store(self.engine.table()),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use parblocks_core::curves::{StableGraph, WeightAssignment};

    #[test]
    fn store_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::open(dir.path().join("nested")).unwrap();
        let ctx = LevelContext::new(2, 3).unwrap();
        assert_eq!(cache.load(ctx).unwrap().stats().entries, 0);

        let cold = CachedEngine::new(ctx, Some(&cache)).unwrap();
        let graph = StableGraph::smooth(2, 0);
        let a = WeightAssignment::from_list(3, &[]);
        let want = cold.engine.graph_rank(&graph, &a).unwrap();
        cold.persist().unwrap();
        assert!(cache.path(ctx).exists());

        let warm = CachedEngine::new(ctx, Some(&cache)).unwrap();
        assert!(warm.loaded() > 0);
        assert_eq!(warm.engine.graph_rank(&graph, &a).unwrap(), want);
        assert!(warm.engine.stats().hits > 0);
    }

    #[test]
    fn corrupt_and_mismatched_files() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::open(dir.path()).unwrap();
        let ctx = LevelContext::new(2, 1).unwrap();
        fs::write(cache.path(ctx), "{not json").unwrap();
        assert!(matches!(cache.load(ctx), Err(CliError::Validation(_))));
        let other = FusionTable::new(LevelContext::new(2, 2).unwrap());
        other.fill().unwrap();
        fs::write(cache.path(ctx), serde_json::to_string(&TableDoc::from_table(&other)).unwrap()).unwrap();
        assert!(matches!(cache.load(ctx), Err(CliError::Validation(_))));
    }
}

//! Memoized three-point ranks.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use spin::RwLock;

use super::{fusion_product, weights_at_level, LevelContext, WeightPartition};
use crate::error::{Error, Result};

type Key = (WeightPartition, WeightPartition, WeightPartition);

fn canonical(a: &WeightPartition, b: &WeightPartition, c: &WeightPartition) -> Key {
    let mut v = [a, b, c];
    v.sort();
    (v[0].clone(), v[1].clone(), v[2].clone())
}

/// Lookup counters of a [`FusionTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TableStats {
    pub hits: u64,
    pub misses: u64,
    pub entries: usize,
}

/// Memo of `N(λ, μ, ν)` at one level, keyed by the sorted triple.
///
/// Readers share the lock. A miss computes the whole row `λ ⊠ μ` outside the
/// lock and then inserts it; two threads missing on the same row both compute
/// it and write the same values.
pub struct FusionTable {
    ctx: LevelContext,
    entries: RwLock<BTreeMap<Key, u64>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl FusionTable {
    pub fn new(ctx: LevelContext) -> Self {
        Self { ctx, entries: RwLock::new(BTreeMap::new()), hits: AtomicU64::new(0), misses: AtomicU64::new(0) }
    }

    pub fn context(&self) -> LevelContext {
        self.ctx
    }

    /// `N(λ, μ, ν)`, computed on first use.
    pub fn get(&self, a: &WeightPartition, b: &WeightPartition, c: &WeightPartition) -> Result<u64> {
        self.ctx.check(a)?;
        self.ctx.check(b)?;
        self.ctx.check(c)?;
        let key = canonical(a, b, c);
        if let Some(&n) = self.entries.read().get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(n);
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let (x, y, z) = (&key.0, &key.1, &key.2);
        let row = fusion_product(self.ctx, x, y)?;
        let mut fresh = Vec::new();
        for kappa in weights_at_level(self.ctx) {
            let n = row.get(&kappa).copied().unwrap_or(0);
            fresh.push((canonical(x, y, &kappa.dual()), n));
        }
        let mut guard = self.entries.write();
        for (k, n) in fresh {
            guard.entry(k).or_insert(n);
        }
        guard
            .get(&canonical(x, y, z))
            .copied()
            .ok_or_else(|| Error::InvariantBreach(format!("row {x} x {y} missing {z}")))
    }

    /// Fills every entry of the table.
    pub fn fill(&self) -> Result<()> {
        let all = weights_at_level(self.ctx);
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate().skip(i) {
                for c in &all[j..] {
                    self.get(a, b, c)?;
                }
            }
        }
        Ok(())
    }

    pub fn stats(&self) -> TableStats {
        TableStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            entries: self.entries.read().len(),
        }
    }

    /// Snapshot of all cached entries in canonical order.
    pub fn entries(&self) -> Vec<(WeightPartition, WeightPartition, WeightPartition, u64)> {
        self.entries.read().iter().map(|((a, b, c), n)| (a.clone(), b.clone(), c.clone(), *n)).collect()
    }

    /// Inserts a stored entry after checking that it is well formed: a
    /// canonical (sorted) key, weights within level, and zero whenever the
    /// total size is not divisible by `r`. Conflicting values are rejected.
    pub fn insert_checked(&self, a: WeightPartition, b: WeightPartition, c: WeightPartition, n: u64) -> Result<()> {
        for x in [&a, &b, &c] {
            self.ctx.check(x).map_err(|e| Error::InvalidTableEntry(format!("{e}")))?;
        }
        if !(a <= b && b <= c) {
            return Err(Error::InvalidTableEntry(format!("key {a} {b} {c} is not sorted")));
        }
        if n != 0 && !(a.size() + b.size() + c.size()).is_multiple_of(self.ctx.rank as u32) {
            return Err(Error::InvalidTableEntry(format!(
                "nonzero value {n} for {a} {b} {c} whose size is not a multiple of {}",
                self.ctx.rank
            )));
        }
        let mut guard = self.entries.write();
        match guard.get(&(a.clone(), b.clone(), c.clone())) {
            Some(&old) if old != n => {
                Err(Error::InvalidTableEntry(format!("conflicting values {old} and {n} for {a} {b} {c}")))
            }
            _ => {
                guard.insert((a, b, c), n);
                Ok(())
            }
        }
    }

    /// Recomputes every cached entry and reports the first disagreement.
    pub fn verify(&self) -> Result<()> {
        for (a, b, c, n) in self.entries() {
            let fresh = super::fuse(self.ctx, &a, &b, &c)?;
            if fresh != n {
                return Err(Error::InvalidTableEntry(format!("stored {n} but computed {fresh} for {a} {b} {c}")));
            }
        }
        Ok(())
    }
}

impl core::fmt::Debug for FusionTable {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FusionTable").field("ctx", &self.ctx).field("stats", &self.stats()).finish()
    }
}

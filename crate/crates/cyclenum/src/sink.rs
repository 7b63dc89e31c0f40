//! Cycle reporting.
//!
//! Enumerators hand every discovered bundle to a sink shard together with its
//! mode-aware expanded count. Shards are worker-private and merged after the
//! run, so reporting never contends.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::bundle::{bundle_expand, canonical_record, BundleMode, CycleBundle, CycleRecord};

/// What a run keeps about the cycles it finds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SinkMode {
    /// Totals only.
    Count,
    /// Totals plus per-length expanded counts.
    Histogram,
    /// Keep every bundle.
    Collect,
}

#[derive(Debug, Clone)]
pub struct SinkShard {
    pub mode: SinkMode,
    pub bundle_mode: BundleMode,
    pub cycles: u64,
    pub bundles: u64,
    pub histogram: BTreeMap<usize, u64>,
    pub collected: Vec<CycleBundle>,
}

impl SinkShard {
    pub fn new(mode: SinkMode, bundle_mode: BundleMode) -> Self {
        SinkShard {
            mode,
            bundle_mode,
            cycles: 0,
            bundles: 0,
            histogram: BTreeMap::new(),
            collected: Vec::new(),
        }
    }

    /// Reports one bundle; `count` is its expanded size under the run's
    /// bundle mode and must be positive.
    pub fn report(&mut self, bundle: CycleBundle, count: u64) {
        debug_assert!(count > 0);
        self.cycles += count;
        self.bundles += 1;
        match self.mode {
            SinkMode::Count => {}
            SinkMode::Histogram => {
                *self.histogram.entry(bundle.len()).or_insert(0) += count;
            }
            SinkMode::Collect => self.collected.push(bundle),
        }
    }

    pub fn merge(&mut self, other: SinkShard) {
        self.cycles += other.cycles;
        self.bundles += other.bundles;
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_insert(0) += v;
        }
        self.collected.extend(other.collected);
    }

    /// Expands collected bundles into canonical concrete cycles.
    pub fn canonical_set(&self) -> BTreeSet<CycleRecord> {
        let mut out = BTreeSet::new();
        for b in &self.collected {
            for rec in bundle_expand(b, self.bundle_mode) {
                out.insert(canonical_record(&rec));
            }
        }
        out
    }

    /// Expanded cycles as a multiset; exposes duplicate reports that the set
    /// view would hide.
    pub fn canonical_multiset(&self) -> Vec<CycleRecord> {
        let mut out: Vec<CycleRecord> = self
            .collected
            .iter()
            .flat_map(|b| bundle_expand(b, self.bundle_mode))
            .map(|r| canonical_record(&r))
            .collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_counts_expanded_cycles() {
        let mut s = SinkShard::new(SinkMode::Histogram, BundleMode::Simple);
        s.report(
            CycleBundle {
                vseq: vec![0, 1],
                hop_ts: vec![vec![1, 2], vec![3]],
                start_ts: 1,
            },
            2,
        );
        assert_eq!(s.cycles, 2);
        assert_eq!(s.bundles, 1);
        assert_eq!(s.histogram.get(&2), Some(&2));
    }

    #[test]
    fn canonical_set_deduplicates_rotations() {
        let mut s = SinkShard::new(SinkMode::Collect, BundleMode::Simple);
        s.report(
            CycleBundle { vseq: vec![2, 0, 1], hop_ts: vec![vec![1], vec![1], vec![1]], start_ts: 1 },
            1,
        );
        s.report(
            CycleBundle { vseq: vec![0, 1, 2], hop_ts: vec![vec![1], vec![1], vec![1]], start_ts: 1 },
            1,
        );
        assert_eq!(s.canonical_set().len(), 1);
        assert_eq!(s.canonical_multiset().len(), 2);
    }
}

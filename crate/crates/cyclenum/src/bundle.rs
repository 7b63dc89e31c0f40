//! Cycle records, cycle bundles, and bundle counting/expansion.
//!
//! A bundle is a cycle given as a vertex sequence plus, per hop, the multiset
//! of admissible parallel-edge timestamps. Hop `i` is the edge
//! `vseq[i] -> vseq[(i+1) % len]`; the sequence is implicitly closed.

use serde::Serialize;

use crate::graph::{Timestamp, VertexId};

/// Counting/expansion mode for a bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BundleMode {
    /// Any combination of per-hop instances.
    Simple,
    /// One instance per hop with strictly increasing timestamps.
    Temporal,
    /// Non-decreasing variant of temporal ordering.
    TemporalNonDecreasing,
}

/// A reported cycle bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleBundle {
    /// Cycle vertices; first vertex is the search's start vertex.
    pub vseq: Vec<VertexId>,
    /// `hop_ts[i]` holds the sorted timestamps of edge `vseq[i] -> vseq[i+1]`
    /// (wrapping), duplicates retained per parallel instance.
    pub hop_ts: Vec<Vec<Timestamp>>,
    /// Timestamp of the starting edge of the search that reported the bundle.
    pub start_ts: Timestamp,
}

/// One concrete timestamped cycle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CycleRecord {
    pub vseq: Vec<VertexId>,
    pub ts: Vec<Timestamp>,
}

impl CycleBundle {
    pub fn len(&self) -> usize {
        self.vseq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vseq.is_empty()
    }
}

/// Number of concrete cycles a bundle represents under `mode`.
///
/// Simple mode is the product of per-hop instance counts. Temporal mode
/// counts selections with (strictly) increasing timestamps via a prefix-sum
/// DP over the sorted hop lists; duplicate instances count separately.
pub fn bundle_count(b: &CycleBundle, mode: BundleMode) -> u64 {
    match mode {
        BundleMode::Simple => b
            .hop_ts
            .iter()
            .map(|h| h.len() as u64)
            .product::<u64>(),
        BundleMode::Temporal | BundleMode::TemporalNonDecreasing => {
            let strict = mode == BundleMode::Temporal;
            // ways[j] = number of increasing selections of the hops so far
            // whose last selected timestamp is the j-th instance of the
            // current hop.
            let Some(first) = b.hop_ts.first() else {
                return 0;
            };
            let mut ways: Vec<u64> = vec![1; first.len()];
            let mut ts_prev: Vec<Timestamp> = first.clone();
            for hop in &b.hop_ts[1..] {
                let mut next_ways = Vec::with_capacity(hop.len());
                for &t in hop {
                    let mut acc = 0u64;
                    for (j, &tp) in ts_prev.iter().enumerate() {
                        let ok = if strict { tp < t } else { tp <= t };
                        if ok {
                            acc += ways[j];
                        }
                    }
                    next_ways.push(acc);
                }
                ways = next_ways;
                ts_prev = hop.clone();
            }
            ways.iter().sum()
        }
    }
}

/// Expands a bundle into its concrete cycles. The result length equals
/// `bundle_count(b, mode)`.
pub fn bundle_expand(b: &CycleBundle, mode: BundleMode) -> Vec<CycleRecord> {
    let mut out = Vec::new();
    let mut chosen: Vec<Timestamp> = Vec::with_capacity(b.hop_ts.len());
    expand_rec(b, mode, 0, &mut chosen, &mut out);
    out
}

fn expand_rec(
    b: &CycleBundle,
    mode: BundleMode,
    hop: usize,
    chosen: &mut Vec<Timestamp>,
    out: &mut Vec<CycleRecord>,
) {
    if hop == b.hop_ts.len() {
        out.push(CycleRecord { vseq: b.vseq.clone(), ts: chosen.clone() });
        return;
    }
    for &t in &b.hop_ts[hop] {
        let ok = match mode {
            BundleMode::Simple => true,
            BundleMode::Temporal => chosen.last().is_none_or(|&p| p < t),
            BundleMode::TemporalNonDecreasing => chosen.last().is_none_or(|&p| p <= t),
        };
        if ok {
            chosen.push(t);
            expand_rec(b, mode, hop + 1, chosen, out);
            chosen.pop();
        }
    }
}

/// Canonical form of a concrete cycle: rotated so the minimum vertex id
/// comes first, hop timestamps rotated along.
pub fn canonical_record(rec: &CycleRecord) -> CycleRecord {
    let k = rec
        .vseq
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| v)
        .map(|(i, _)| i)
        .unwrap_or(0);
    let n = rec.vseq.len();
    CycleRecord {
        vseq: (0..n).map(|i| rec.vseq[(k + i) % n]).collect(),
        ts: (0..n).map(|i| rec.ts[(k + i) % n]).collect(),
    }
}

/// Canonical vertex rotation only (untimed comparisons).
pub fn canonical_vseq(vseq: &[VertexId]) -> Vec<VertexId> {
    let k = vseq
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| v)
        .map(|(i, _)| i)
        .unwrap_or(0);
    let n = vseq.len();
    (0..n).map(|i| vseq[(k + i) % n]).collect()
}

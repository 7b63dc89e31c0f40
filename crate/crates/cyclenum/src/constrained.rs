//! Blocking state for constrained searches: closing times for temporal
//! cycles and barriers for hop-constrained cycles. Both replace Johnson's
//! blocked set; both journal every write so state can be rolled back (reset
//! between starts, or suffix-rollback for copy-on-steal with complete
//! unblocking).

use crate::graph::{TemporalGraph, Timestamp, VertexId};
use crate::metrics::VisitCounters;

/// Per-vertex closing times. An outgoing edge `(v -> w, t)` is traversable
/// iff `t < ct[v]`; `Timestamp::MAX` means fully unblocked.
#[derive(Debug, Clone)]
pub struct ClosingTimes {
    ct: Vec<Timestamp>,
    journal: Vec<(VertexId, Timestamp, u32)>,
}

impl ClosingTimes {
    pub fn new(n: usize) -> Self {
        ClosingTimes { ct: vec![Timestamp::MAX; n], journal: Vec::new() }
    }

    #[inline]
    pub fn get(&self, v: VertexId) -> Timestamp {
        self.ct[v as usize]
    }

    #[inline]
    pub fn set(&mut self, v: VertexId, val: Timestamp, depth: u32) {
        self.journal.push((v, self.ct[v as usize], depth));
        self.ct[v as usize] = val;
    }

    /// Restores every journalled value, newest first.
    pub fn reset(&mut self) {
        while let Some((v, old, _)) = self.journal.pop() {
            self.ct[v as usize] = old;
        }
    }

    /// Copy-on-steal with complete unblocking: undo restrictive writes made
    /// at depth >= `d`. A write is undone only when undoing raises the
    /// closing time; permissive writes (raises) are kept.
    pub fn rollback_restrictive_from_depth(&mut self, d: u32) {
        let mut keep = Vec::new();
        while let Some((v, old, depth)) = self.journal.pop() {
            if depth < d {
                self.journal.push((v, old, depth));
                break;
            }
            if old > self.ct[v as usize] {
                self.ct[v as usize] = old;
            } else {
                keep.push((v, old, depth));
            }
        }
        // keep permissive entries so reset still restores pristine state
        while let Some(e) = keep.pop() {
            self.journal.push(e);
        }
    }

    pub fn is_pristine(&self) -> bool {
        self.journal.is_empty() && self.ct.iter().all(|&t| t == Timestamp::MAX)
    }

    /// Raises `ct[v]` to `new_ct` and cascades: for every newly usable
    /// outgoing edge, incoming edges with smaller timestamps become
    /// traversable again, recursively. Timestamps outside `[lo, hi]` never
    /// participate. No-op when `new_ct <= ct[v]`.
    pub fn unblock(
        &mut self,
        g: &TemporalGraph,
        lo: Timestamp,
        hi: Timestamp,
        v: VertexId,
        new_ct: Timestamp,
        depth: u32,
        counters: &mut VisitCounters,
    ) {
        let mut work: Vec<(VertexId, Timestamp)> = vec![(v, new_ct)];
        while let Some((x, nc)) = work.pop() {
            let old = self.ct[x as usize];
            if nc <= old {
                continue;
            }
            counters.unblock();
            self.set(x, nc, depth);
            // max newly usable out timestamp in [old, nc) ∩ [lo, hi]
            let mut m: Option<Timestamp> = None;
            for grp in g.out_groups(x) {
                let up = nc.min(hi.saturating_add(1));
                let idx = grp.ts.partition_point(|&t| t < up);
                if idx == 0 {
                    continue;
                }
                let t = grp.ts[idx - 1];
                if t >= old.max(lo) && m.is_none_or(|mm| t > mm) {
                    m = Some(t);
                }
            }
            let Some(m) = m else { continue };
            // incoming edges (u -> x, t) with t < m become alive: ct[u] >= t+1
            for grp in g.in_groups(x) {
                let idx = grp.ts.partition_point(|&t| t < m);
                if idx == 0 {
                    continue;
                }
                let t = grp.ts[idx - 1];
                if t < lo {
                    continue;
                }
                let u = grp.nbr;
                let want = t.saturating_add(1);
                if self.ct[u as usize] < want {
                    work.push((u, want));
                }
            }
        }
    }
}

/// Per-vertex hop barriers. `bar[v] = b` records that the start vertex
/// cannot be reached in fewer than `b + 1` hops from `v`; a vertex is
/// blocked at path length `len` iff `len >= L - bar[v]`. Zero means
/// unblocked.
#[derive(Debug, Clone)]
pub struct Barriers {
    bar: Vec<u32>,
    journal: Vec<(VertexId, u32, u32)>,
}

impl Barriers {
    pub fn new(n: usize) -> Self {
        Barriers { bar: vec![0; n], journal: Vec::new() }
    }

    #[inline]
    pub fn get(&self, v: VertexId) -> u32 {
        self.bar[v as usize]
    }

    #[inline]
    pub fn blocked(&self, v: VertexId, path_len: u32, l: u32) -> bool {
        path_len as i64 >= l as i64 - self.bar[v as usize] as i64
    }

    #[inline]
    pub fn set(&mut self, v: VertexId, val: u32, depth: u32) {
        self.journal.push((v, self.bar[v as usize], depth));
        self.bar[v as usize] = val;
    }

    pub fn reset(&mut self) {
        while let Some((v, old, _)) = self.journal.pop() {
            self.bar[v as usize] = old;
        }
    }

    /// Complete-unblocking rollback: undo barrier raises recorded at depth
    /// >= `d`; keep lowerings.
    pub fn rollback_restrictive_from_depth(&mut self, d: u32) {
        let mut keep = Vec::new();
        while let Some((v, old, depth)) = self.journal.pop() {
            if depth < d {
                self.journal.push((v, old, depth));
                break;
            }
            if old < self.bar[v as usize] {
                self.bar[v as usize] = old;
            } else {
                keep.push((v, old, depth));
            }
        }
        while let Some(e) = keep.pop() {
            self.journal.push(e);
        }
    }

    pub fn is_pristine(&self) -> bool {
        self.journal.is_empty() && self.bar.iter().all(|&b| b == 0)
    }

    /// Lowers `bar[v]` to `new_bar` and relaxes every vertex that reaches
    /// `v` through in-window edges: a vertex `u` reaching `v` in `k` hops
    /// drops to `new_bar + k` when that improves it. Reverse BFS, pruned on
    /// no-improvement.
    pub fn unblock(
        &mut self,
        g: &TemporalGraph,
        lo: Timestamp,
        hi: Timestamp,
        v: VertexId,
        new_bar: u32,
        depth: u32,
        counters: &mut VisitCounters,
    ) {
        counters.unblock();
        if new_bar < self.bar[v as usize] {
            self.set(v, new_bar, depth);
        }
        let mut queue: std::collections::VecDeque<VertexId> = std::collections::VecDeque::new();
        queue.push_back(v);
        while let Some(x) = queue.pop_front() {
            let cand = self.bar[x as usize].saturating_add(1);
            for grp in g.in_groups(x) {
                let lo_i = grp.ts.partition_point(|&t| t < lo);
                let hi_i = grp.ts.partition_point(|&t| t <= hi);
                if lo_i == hi_i {
                    continue;
                }
                let u = grp.nbr;
                if cand < self.bar[u as usize] {
                    counters.unblock();
                    self.set(u, cand, depth);
                    queue.push_back(u);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TemporalGraph;

    #[test]
    fn closing_time_unblock_isolated_vertex() {
        let g = TemporalGraph::from_dense_edges(&[(1, 2, 1)], 3);
        let mut ct = ClosingTimes::new(3);
        let mut c = VisitCounters::default();
        ct.set(0, 3, 1);
        ct.unblock(&g, 0, 100, 0, 9, 1, &mut c);
        assert_eq!(ct.get(0), 9);
        assert_eq!(ct.get(1), Timestamp::MAX);
    }

    #[test]
    fn closing_time_unblock_cascades_incoming() {
        // u -> v @4, v -> w @5
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 4), (1, 2, 5)], 3);
        let mut ct = ClosingTimes::new(3);
        let mut c = VisitCounters::default();
        ct.set(1, 5, 1); // edge v->w@5 blocked
        ct.set(0, 2, 1); // edge u->v@4 blocked
        ct.unblock(&g, 0, 100, 1, Timestamp::MAX, 1, &mut c);
        assert_eq!(ct.get(1), Timestamp::MAX);
        assert!(ct.get(0) >= 5, "edge u->v@4 must be traversable, ct[u] = {}", ct.get(0));
    }

    #[test]
    fn closing_time_unblock_noop_on_equal() {
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 4)], 2);
        let mut ct = ClosingTimes::new(2);
        let mut c = VisitCounters::default();
        ct.set(0, 7, 1);
        let journal_len_before = 1;
        ct.unblock(&g, 0, 100, 0, 7, 1, &mut c);
        assert_eq!(ct.get(0), 7);
        assert_eq!(c.unblock_calls, 0);
        let _ = journal_len_before;
    }

    #[test]
    fn barrier_unblock_spec_examples() {
        // edge u -> v, bar = {u: 7, v: 5}, reduce v to 1 -> {u: 2, v: 1}
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 0)], 2);
        let mut bar = Barriers::new(2);
        let mut c = VisitCounters::default();
        bar.set(0, 7, 1);
        bar.set(1, 5, 1);
        bar.unblock(&g, Timestamp::MIN, Timestamp::MAX, 1, 1, 1, &mut c);
        assert_eq!((bar.get(0), bar.get(1)), (2, 1));

        // chain x -> u -> v, all 9, reduce v to 0 -> {v:0, u:1, x:2}
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 0), (1, 2, 0)], 3);
        let mut bar = Barriers::new(3);
        bar.set(0, 9, 1);
        bar.set(1, 9, 1);
        bar.set(2, 9, 1);
        bar.unblock(&g, Timestamp::MIN, Timestamp::MAX, 2, 0, 1, &mut c);
        assert_eq!((bar.get(0), bar.get(1), bar.get(2)), (2, 1, 0));
    }

    #[test]
    fn barrier_unblock_to_current_value_still_relaxes() {
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 0)], 2);
        let mut bar = Barriers::new(2);
        let mut c = VisitCounters::default();
        bar.set(0, 9, 1);
        bar.unblock(&g, Timestamp::MIN, Timestamp::MAX, 1, 0, 1, &mut c);
        assert_eq!(bar.get(0), 1);
        assert_eq!(bar.get(1), 0);
    }

    #[test]
    fn journals_restore_on_reset() {
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 4), (1, 0, 6)], 2);
        let mut ct = ClosingTimes::new(2);
        let mut c = VisitCounters::default();
        ct.set(0, 3, 1);
        ct.unblock(&g, 0, 100, 0, 50, 2, &mut c);
        ct.reset();
        assert!(ct.is_pristine());

        let mut bar = Barriers::new(2);
        bar.set(0, 4, 1);
        bar.unblock(&g, Timestamp::MIN, Timestamp::MAX, 0, 2, 1, &mut c);
        bar.reset();
        assert!(bar.is_pristine());
    }
}

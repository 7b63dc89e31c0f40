//! Time-window semantics and per-start-edge pruning masks.
//!
//! A search rooted at a start edge with timestamp `t0` only visits edges
//! inside `[t0, t0 + delta]`. Among edges sharing the timestamp `t0`, only
//! those departing from a vertex with a smaller id than the start vertex are
//! admissible, which makes each time-window cycle reachable from exactly one
//! start edge.

use crate::graph::{TemporalEdge, TemporalGraph, Timestamp, VertexId, WindowView};

/// Time-window length in timestamp ticks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowConstraint {
    pub delta: Timestamp,
}

impl WindowConstraint {
    pub fn new(delta: Timestamp) -> Self {
        assert!(delta >= 0, "window length must be non-negative");
        WindowConstraint { delta }
    }

    /// A window covering every timestamp from the start edge onwards.
    pub fn unbounded() -> Self {
        WindowConstraint { delta: Timestamp::MAX }
    }

    /// Upper window bound for a start edge at `t0`, saturating on overflow.
    pub fn hi_for(&self, t0: Timestamp) -> Timestamp {
        t0.saturating_add(self.delta)
    }
}

/// The window view `[t0, t0 + delta]` anchored at a start edge.
pub fn window_of<'g>(
    g: &'g TemporalGraph,
    start_edge: TemporalEdge,
    w: WindowConstraint,
) -> WindowView<'g> {
    WindowView::new(g, start_edge.ts, w.hi_for(start_edge.ts))
}

/// Same-timestamp tie-break of the start-edge partition: a candidate edge
/// already inside the window is admissible unless it shares the start
/// timestamp and departs from a vertex with an id not smaller than the start
/// vertex. The start edge itself is always admissible.
pub fn same_ts_admissible(candidate: TemporalEdge, start_edge: TemporalEdge) -> bool {
    debug_assert!(candidate.ts >= start_edge.ts);
    if candidate == start_edge {
        return true;
    }
    candidate.ts > start_edge.ts
        || (candidate.ts == start_edge.ts && candidate.src < start_edge.src)
}

/// Scratch for mask construction; reusable across start edges.
#[derive(Default)]
pub struct MaskScratch {
    fwd: Vec<bool>,
    bwd: Vec<bool>,
    queue: Vec<VertexId>,
    ea: Vec<Timestamp>,
    md: Vec<Timestamp>,
}

/// Vertices strongly connected to `start_edge.dst` in the window-filtered
/// graph (intersection of forward reachability from the edge head and
/// backward reachability from the edge tail). Returns `None` when no cycle
/// through the start edge can exist, which tells the caller to skip the
/// start. The optional `enterable` predicate restricts traversal (used for
/// the classic `id > v0` guard).
pub fn scc_of_edge(
    g: &TemporalGraph,
    start_edge: TemporalEdge,
    w: WindowConstraint,
    enterable: impl Fn(VertexId) -> bool,
    scratch: &mut MaskScratch,
) -> Option<Box<[bool]>> {
    scc_of_edge_bounded(g, start_edge, start_edge.ts, w.hi_for(start_edge.ts), enterable, scratch)
}

/// `scc_of_edge` with explicit window bounds; classic (unwindowed) searches
/// pass the full timestamp range.
pub fn scc_of_edge_bounded(
    g: &TemporalGraph,
    start_edge: TemporalEdge,
    lo: Timestamp,
    hi: Timestamp,
    enterable: impl Fn(VertexId) -> bool,
    scratch: &mut MaskScratch,
) -> Option<Box<[bool]>> {
    let n = g.vertex_count();
    let view = WindowView::new(g, lo, hi);
    scratch.fwd.clear();
    scratch.fwd.resize(n, false);
    scratch.bwd.clear();
    scratch.bwd.resize(n, false);

    // Forward from dst over out-edges.
    scratch.queue.clear();
    scratch.fwd[start_edge.dst as usize] = true;
    scratch.queue.push(start_edge.dst);
    while let Some(u) = scratch.queue.pop() {
        for grp in g.out_groups(u) {
            if scratch.fwd[grp.nbr as usize] || !(enterable(grp.nbr) || grp.nbr == start_edge.src)
            {
                continue;
            }
            if !view.slice(&grp.ts).is_empty() {
                scratch.fwd[grp.nbr as usize] = true;
                scratch.queue.push(grp.nbr);
            }
        }
    }
    if !scratch.fwd[start_edge.src as usize] {
        return None;
    }

    // Backward from src over in-edges.
    scratch.bwd[start_edge.src as usize] = true;
    scratch.queue.push(start_edge.src);
    while let Some(u) = scratch.queue.pop() {
        for grp in g.in_groups(u) {
            if scratch.bwd[grp.nbr as usize] || !(enterable(grp.nbr) || grp.nbr == start_edge.src)
            {
                continue;
            }
            if !view.slice(&grp.ts).is_empty() {
                scratch.bwd[grp.nbr as usize] = true;
                scratch.queue.push(grp.nbr);
            }
        }
    }

    let mask: Box<[bool]> = (0..n)
        .map(|i| scratch.fwd[i] && scratch.bwd[i])
        .collect();
    debug_assert!(mask[start_edge.src as usize] && mask[start_edge.dst as usize]);
    Some(mask)
}

/// Vertices on some strictly-time-increasing path that starts with the edge
/// and on one that closes back into its source, inside the window. Vertices
/// carry earliest-arrival and latest-departure times; a vertex survives when
/// it can be left strictly after the earliest moment it can be reached.
/// Returns `None` when no temporal cycle through the start edge exists.
pub fn cycle_union_of_edge(
    g: &TemporalGraph,
    start_edge: TemporalEdge,
    w: WindowConstraint,
    strict: bool,
    scratch: &mut MaskScratch,
) -> Option<Box<[bool]>> {
    let n = g.vertex_count();
    let t0 = start_edge.ts;
    let hi = w.hi_for(t0);
    const INF: Timestamp = Timestamp::MAX;
    const NEG: Timestamp = Timestamp::MIN;

    // Earliest arrival via strictly increasing timestamps, seeded by the
    // start edge. Monotone relaxation over out-edges.
    scratch.ea.clear();
    scratch.ea.resize(n, INF);
    scratch.queue.clear();
    scratch.ea[start_edge.dst as usize] = t0;
    scratch.queue.push(start_edge.dst);
    while let Some(u) = scratch.queue.pop() {
        let au = scratch.ea[u as usize];
        for grp in g.out_groups(u) {
            let idx = if strict {
                grp.ts.partition_point(|&t| t <= au)
            } else {
                grp.ts.partition_point(|&t| t < au)
            };
            if idx == grp.ts.len() {
                continue;
            }
            let t = grp.ts[idx];
            if t > hi {
                continue;
            }
            if t < scratch.ea[grp.nbr as usize] {
                scratch.ea[grp.nbr as usize] = t;
                if grp.nbr != start_edge.src {
                    scratch.queue.push(grp.nbr);
                }
            }
        }
    }
    if scratch.ea[start_edge.src as usize] == INF {
        return None;
    }

    // Latest departure on a strictly increasing path that closes into the
    // start vertex. Relaxation over in-edges, maximising.
    scratch.md.clear();
    scratch.md.resize(n, NEG);
    scratch.md[start_edge.src as usize] = INF; // departures from v0 close immediately
    scratch.queue.push(start_edge.src);
    while let Some(u) = scratch.queue.pop() {
        let du = scratch.md[u as usize];
        for grp in g.in_groups(u) {
            // edge (nbr -> u, t): usable when it precedes the departure bound
            let hi_t = if du == INF {
                hi
            } else if strict {
                (du - 1).min(hi)
            } else {
                du.min(hi)
            };
            let idx = grp.ts.partition_point(|&t| t <= hi_t);
            if idx == 0 {
                continue;
            }
            let t = grp.ts[idx - 1];
            if t < t0 {
                continue;
            }
            if t > scratch.md[grp.nbr as usize] {
                scratch.md[grp.nbr as usize] = t;
                scratch.queue.push(grp.nbr);
            }
        }
    }

    let src = start_edge.src as usize;
    let dst = start_edge.dst as usize;
    let mask: Box<[bool]> = (0..n)
        .map(|i| {
            if i == src || i == dst {
                true
            } else if strict {
                scratch.ea[i] < INF && scratch.md[i] > scratch.ea[i]
            } else {
                scratch.ea[i] < INF && scratch.md[i] >= scratch.ea[i]
            }
        })
        .collect();
    Some(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TemporalGraph;

    fn triangle() -> TemporalGraph {
        TemporalGraph::from_dense_edges(&[(0, 1, 1), (1, 2, 2), (2, 0, 3)], 3)
    }

    fn e(src: VertexId, dst: VertexId, ts: Timestamp) -> TemporalEdge {
        TemporalEdge { src, dst, ts }
    }

    #[test]
    fn window_bounds() {
        let g = triangle();
        let v = window_of(&g, e(0, 1, 2), WindowConstraint::new(5));
        assert_eq!((v.lo, v.hi), (2, 7));
        let v = window_of(&g, e(0, 1, 2), WindowConstraint::new(0));
        assert_eq!((v.lo, v.hi), (2, 2));
        let v = window_of(&g, e(0, 1, 2), WindowConstraint::unbounded());
        assert_eq!((v.lo, v.hi), (2, Timestamp::MAX));
    }

    #[test]
    fn tie_break_rule() {
        let start = e(4, 5, 3);
        assert!(same_ts_admissible(e(9, 1, 5), start));
        assert!(!same_ts_admissible(e(7, 1, 3), start));
        assert!(same_ts_admissible(e(2, 1, 3), start));
        assert!(same_ts_admissible(start, start));
    }

    #[test]
    fn scc_whole_triangle_in_window() {
        let g = triangle();
        let mut scratch = MaskScratch::default();
        let mask = scc_of_edge(&g, e(0, 1, 1), WindowConstraint::new(5), |_| true, &mut scratch)
            .expect("cycle exists");
        assert_eq!(&*mask, &[true, true, true]);
    }

    #[test]
    fn scc_window_too_small() {
        let g = triangle();
        let mut scratch = MaskScratch::default();
        // window [1,2] lacks the closing edge at ts 3
        assert!(
            scc_of_edge(&g, e(0, 1, 1), WindowConstraint::new(1), |_| true, &mut scratch).is_none()
        );
    }

    #[test]
    fn scc_dead_head() {
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 1)], 2);
        let mut scratch = MaskScratch::default();
        assert!(
            scc_of_edge(&g, e(0, 1, 1), WindowConstraint::new(9), |_| true, &mut scratch).is_none()
        );
    }

    #[test]
    fn cycle_union_increasing_triangle() {
        let g = triangle();
        let mut scratch = MaskScratch::default();
        let mask =
            cycle_union_of_edge(&g, e(0, 1, 1), WindowConstraint::new(5), true, &mut scratch).unwrap();
        assert_eq!(&*mask, &[true, true, true]);
    }

    #[test]
    fn cycle_union_reversed_time_skips() {
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 3), (1, 2, 2), (2, 0, 1)], 3);
        let mut scratch = MaskScratch::default();
        assert!(cycle_union_of_edge(&g, e(0, 1, 3), WindowConstraint::new(9), true, &mut scratch)
            .is_none());
    }

    #[test]
    fn cycle_union_no_later_out_edge() {
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 5), (1, 2, 3), (2, 0, 9)], 3);
        let mut scratch = MaskScratch::default();
        // dst 1 has no out-edge after ts 5
        assert!(cycle_union_of_edge(&g, e(0, 1, 5), WindowConstraint::new(9), true, &mut scratch)
            .is_none());
    }
}

//! Sequential temporal-cycle enumerator: Johnson's scheme with the blocked
//! set replaced by per-vertex closing times.
//!
//! A vertex pushed at (minimum feasible) arrival `a` gets the closing-time
//! marker `a + 1`, which blocks re-entry at later arrivals. The pre-push
//! value is kept on the frame (the PrevLocks stack) so copy-on-steal can
//! restore it. A failed visit leaves the marker in place: arrivals at or
//! after `a` stay dead. A successful visit raises the closing time to the
//! window bound and cascades through incoming edges.

use smallvec::SmallVec;

use crate::bundle::{bundle_count, CycleBundle};
use crate::constrained::ClosingTimes;
use crate::error::EnumError;
use crate::graph::{TemporalGraph, Timestamp, VertexId};
use crate::metrics::VisitCounters;
use crate::pruning::MaskScratch;
use crate::search::{start_units, Constraints, Mode, StartEnv};
use crate::sink::SinkShard;
use crate::trace::{Recorder, TraceEvent};

pub fn temporal_johnson_enumerate(
    g: &TemporalGraph,
    c: &Constraints,
    shard: &mut SinkShard,
    rec: &mut Recorder,
) -> Result<VisitCounters, EnumError> {
    c.validate()?;
    if c.mode != Mode::Temporal {
        return Err(EnumError::Incompatible("temporal_johnson_enumerate requires temporal mode".into()));
    }
    let mut counters = VisitCounters::default();
    let mut scratch = MaskScratch::default();
    let mut ct = ClosingTimes::new(g.vertex_count());
    let mut on_path = vec![false; g.vertex_count()];
    for unit in start_units(g, c) {
        let Some(env) = StartEnv::resolve(g, c, &unit, &mut scratch) else {
            continue;
        };
        let mut run = Run {
            g,
            env: &env,
            ct: &mut ct,
            on_path: &mut on_path,
            frames: Vec::new(),
            shard,
            counters: &mut counters,
            rec,
        };
        run.root();
        ct.reset();
    }
    Ok(counters)
}

pub(crate) struct TFrame {
    pub v: VertexId,
    pub hop_ts: SmallVec<[Timestamp; 4]>,
    /// Minimum feasible arrival over the hop list.
    pub arrival: Timestamp,
    /// Pre-push closing time (PrevLocks entry).
    pub saved_ct: Timestamp,
}

struct Run<'a> {
    g: &'a TemporalGraph,
    env: &'a StartEnv,
    ct: &'a mut ClosingTimes,
    on_path: &'a mut [bool],
    frames: Vec<TFrame>,
    shard: &'a mut SinkShard,
    counters: &'a mut VisitCounters,
    rec: &'a mut Recorder,
}

impl Run<'_> {
    fn root(&mut self) {
        let env = self.env;
        // boundary convention: the start vertex starts at the window edge
        let depth = 1;
        self.frames.push(TFrame {
            v: env.v0,
            hop_ts: SmallVec::new(),
            arrival: env.t0,
            saved_ct: self.ct.get(env.v0),
        });
        self.ct.set(env.v0, env.hi.saturating_add(1), depth);
        self.on_path[env.v0 as usize] = true;
        self.rec.emit(TraceEvent::Push(env.v0));
        self.counters.vertex();
        self.counters.edge(env.first_ts.len() as u64);

        if env.bundles {
            self.explore(env.first, env.first_ts.clone(), env.t0);
        } else {
            for i in 0..env.first_ts.len() {
                let t = env.first_ts[i];
                self.explore(env.first, SmallVec::from_slice(&[t]), t);
            }
        }

        self.on_path[env.v0 as usize] = false;
        let f = self.frames.pop().expect("root frame");
        self.rec.emit(TraceEvent::Pop(f.v));
    }

    /// Enters `v` through the admissible hop list with minimum feasible
    /// arrival `arrival`.
    fn explore(
        &mut self,
        v: VertexId,
        hop_ts: SmallVec<[Timestamp; 4]>,
        arrival: Timestamp,
    ) -> bool {
        let env = self.env;
        let saved = self.ct.get(v);
        let depth = self.frames.len() as u32 + 1;
        self.frames.push(TFrame { v, hop_ts, arrival, saved_ct: saved });
        self.ct.set(v, arrival.saturating_add(1), depth);
        self.on_path[v as usize] = true;
        self.rec.emit(TraceEvent::Push(v));
        self.counters.vertex();

        let mut found = false;
        for gi in 0..self.g.out_groups(v).len() {
            let grp = &self.g.out_groups(v)[gi];
            let w = grp.nbr;
            let base = env.admissible_ts(v, &grp.ts);
            if base.is_empty() {
                continue;
            }
            // temporal order plus the source-side closing-time gate; the
            // marker never hides later raises because `saved >= arrival + 2`
            let limit = saved.max(self.ct.get(v)).min(env.hi.saturating_add(1));
            let from = if env.strict_temporal {
                base.partition_point(|&t| t <= arrival)
            } else {
                base.partition_point(|&t| t < arrival)
            };
            let to = base.partition_point(|&t| t < limit);
            if from >= to {
                continue;
            }
            let sub = &base[from..to];
            self.counters.edge(sub.len() as u64);
            let sub: SmallVec<[Timestamp; 4]> = SmallVec::from_slice(sub);

            if w == env.v0 {
                self.report(&sub);
                found = true;
            } else if !self.on_path[w as usize] && env.enterable(w) {
                if env.bundles {
                    let a_w = sub[0];
                    if a_w.saturating_add(1) < self.ct.get(w) {
                        found |= self.explore(w, sub, a_w);
                    }
                } else {
                    for &t in &sub {
                        if self.on_path[w as usize] {
                            break;
                        }
                        if t.saturating_add(1) < self.ct.get(w) {
                            found |= self.explore(w, SmallVec::from_slice(&[t]), t);
                        }
                    }
                }
            }
        }

        self.on_path[v as usize] = false;
        let frame = self.frames.pop().expect("own frame");
        debug_assert_eq!(frame.v, v);
        self.rec.emit(TraceEvent::Pop(v));
        if found {
            self.rec.emit(TraceEvent::Unblock(v));
            closing_time_unblock(
                self.g,
                self.ct,
                env.lo,
                env.hi,
                v,
                env.hi.saturating_add(1),
                self.frames.len() as u32 + 1,
                self.counters,
            );
        }
        // failed visits keep the arrival marker: later arrivals stay dead
        found
    }

    fn report(&mut self, closing_ts: &[Timestamp]) {
        let vseq: Vec<VertexId> = self.frames.iter().map(|f| f.v).collect();
        let mut hop_ts: Vec<Vec<Timestamp>> =
            self.frames[1..].iter().map(|f| f.hop_ts.to_vec()).collect();
        hop_ts.push(closing_ts.to_vec());
        let bundle = CycleBundle { vseq, hop_ts, start_ts: self.env.t0 };
        let count = bundle_count(&bundle, self.shard.bundle_mode);
        debug_assert!(count > 0, "reported temporal bundle must be realisable");
        if count > 0 {
            self.rec.emit(TraceEvent::Report);
            self.shard.report(bundle, count);
        }
    }
}

/// Raises the closing time of `v` to `new_ct` and recursively unblocks
/// incoming edges that can now precede a usable outgoing edge.
#[allow(clippy::too_many_arguments)]
pub fn closing_time_unblock(
    g: &TemporalGraph,
    ct: &mut ClosingTimes,
    lo: Timestamp,
    hi: Timestamp,
    v: VertexId,
    new_ct: Timestamp,
    depth: u32,
    counters: &mut VisitCounters,
) {
    ct.unblock(g, lo, hi, v, new_ct, depth, counters);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TemporalGraph;
    use crate::seq::tiernan::oracle_set;
    use crate::sink::{SinkMode, SinkShard};

    fn run(g: &TemporalGraph, c: &Constraints) -> SinkShard {
        let mut shard = SinkShard::new(SinkMode::Collect, c.bundle_mode());
        temporal_johnson_enumerate(g, c, &mut shard, &mut Recorder::disabled()).unwrap();
        shard
    }

    #[test]
    fn two_hop_temporal_cycle() {
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 1), (1, 0, 2)], 2);
        let shard = run(&g, &Constraints::temporal(None));
        assert_eq!(shard.cycles, 1);
    }

    #[test]
    fn rotation_with_increasing_order_counts_once() {
        // the edge set {0->1@2, 1->0@1} has exactly one increasing rotation,
        // rooted at its minimum-timestamp edge
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 2), (1, 0, 1)], 2);
        let shard = run(&g, &Constraints::temporal(None));
        assert_eq!(shard.cycles, 1);
        assert_eq!(shard.canonical_set(), oracle_set(&g, &Constraints::temporal(None)));
    }

    #[test]
    fn equal_timestamps_admit_no_strict_cycle() {
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 2), (1, 0, 2)], 2);
        let shard = run(&g, &Constraints::temporal(None));
        assert_eq!(shard.cycles, 0);
        let nondecreasing = Constraints {
            strict_temporal: false,
            ..Constraints::temporal(None)
        };
        let shard = run(&g, &nondecreasing);
        assert_eq!(shard.cycles, 1);
    }

    #[test]
    fn reversed_triangle_empty() {
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 3), (1, 2, 2), (2, 0, 1)], 3);
        let shard = run(&g, &Constraints::temporal(None));
        assert_eq!(shard.cycles, 0);
    }

    #[test]
    fn bundles_match_oracle_on_parallel_edges() {
        let g = TemporalGraph::from_dense_edges(
            &[(0, 1, 1), (0, 1, 2), (1, 0, 3), (1, 0, 1), (1, 2, 2), (2, 0, 4)],
            3,
        );
        for delta in [1, 3, 10] {
            let c = Constraints::temporal(Some(crate::pruning::WindowConstraint::new(delta)));
            let shard = run(&g, &c);
            assert_eq!(
                shard.canonical_multiset(),
                {
                    let mut o = SinkShard::new(SinkMode::Collect, c.bundle_mode());
                    crate::seq::tiernan::tiernan_enumerate(&g, &c, &mut o).unwrap();
                    o.canonical_multiset()
                },
                "delta {delta}"
            );
            assert_eq!(shard.canonical_set(), oracle_set(&g, &c), "delta {delta}");
        }
    }
}

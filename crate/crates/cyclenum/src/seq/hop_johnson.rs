//! Sequential hop-constrained enumerator: Johnson's scheme with the blocked
//! set replaced by per-vertex barriers.
//!
//! A barrier records how many hops from a vertex are known insufficient to
//! close a cycle, so a vertex is skipped whenever the remaining hop budget
//! cannot beat it. Failed visits raise the barrier to `L - depth + 1`;
//! successful visits lower it to zero and relax every vertex that can reach
//! the unblocked one.

use smallvec::SmallVec;

use crate::bundle::{bundle_count, CycleBundle};
use crate::constrained::Barriers;
use crate::error::EnumError;
use crate::graph::{TemporalGraph, Timestamp, VertexId};
use crate::metrics::VisitCounters;
use crate::pruning::MaskScratch;
use crate::search::{start_units, Constraints, Mode, StartEnv};
use crate::sink::SinkShard;
use crate::trace::{Recorder, TraceEvent};

pub fn hop_johnson_enumerate(
    g: &TemporalGraph,
    c: &Constraints,
    shard: &mut SinkShard,
    rec: &mut Recorder,
) -> Result<VisitCounters, EnumError> {
    c.validate()?;
    let Mode::Hop(l) = c.mode else {
        return Err(EnumError::Incompatible("hop_johnson_enumerate requires hop mode".into()));
    };
    let mut counters = VisitCounters::default();
    let mut scratch = MaskScratch::default();
    let mut bar = Barriers::new(g.vertex_count());
    let mut on_path = vec![false; g.vertex_count()];
    for unit in start_units(g, c) {
        let Some(env) = StartEnv::resolve(g, c, &unit, &mut scratch) else {
            continue;
        };
        let mut run = Run {
            g,
            env: &env,
            l,
            bar: &mut bar,
            on_path: &mut on_path,
            frames: Vec::new(),
            shard,
            counters: &mut counters,
            rec,
        };
        run.root();
        bar.reset();
    }
    Ok(counters)
}

struct HFrame {
    v: VertexId,
    hop_ts: SmallVec<[Timestamp; 4]>,
    /// Pre-push barrier (PrevLocks entry).
    saved_bar: u32,
}

struct Run<'a> {
    g: &'a TemporalGraph,
    env: &'a StartEnv,
    l: u32,
    bar: &'a mut Barriers,
    on_path: &'a mut [bool],
    frames: Vec<HFrame>,
    shard: &'a mut SinkShard,
    counters: &'a mut VisitCounters,
    rec: &'a mut Recorder,
}

impl Run<'_> {
    fn root(&mut self) {
        let env = self.env;
        self.frames.push(HFrame {
            v: env.v0,
            hop_ts: SmallVec::new(),
            saved_bar: self.bar.get(env.v0),
        });
        self.on_path[env.v0 as usize] = true;
        self.rec.emit(TraceEvent::Push(env.v0));
        self.counters.vertex();
        self.counters.edge(env.first_ts.len() as u64);
        // the first hop is never barrier-blocked: path length 1 < L
        self.explore(env.first, env.first_ts.clone());
        self.on_path[env.v0 as usize] = false;
        let f = self.frames.pop().expect("root frame");
        self.rec.emit(TraceEvent::Pop(f.v));
    }

    fn explore(&mut self, v: VertexId, hop_ts: SmallVec<[Timestamp; 4]>) -> bool {
        let env = self.env;
        self.frames.push(HFrame { v, hop_ts, saved_bar: self.bar.get(v) });
        self.on_path[v as usize] = true;
        self.rec.emit(TraceEvent::Push(v));
        self.counters.vertex();
        // path vertex count including v0 and v; the closing edge makes a
        // cycle of exactly this many edges
        let d = self.frames.len() as u32;

        let mut found = false;
        for grp in self.g.out_groups(v) {
            let w = grp.nbr;
            let sub = env.admissible_ts(v, &grp.ts);
            if sub.is_empty() {
                continue;
            }
            self.counters.edge(sub.len() as u64);
            if w == env.v0 {
                if d <= self.l {
                    self.report(sub);
                    found = true;
                }
            } else if !self.on_path[w as usize]
                && env.enterable(w)
                && !self.bar.blocked(w, d, self.l)
            {
                if env.bundles {
                    found |= self.explore(w, SmallVec::from_slice(sub));
                } else {
                    for &t in sub {
                        if self.on_path[w as usize] || self.bar.blocked(w, d, self.l) {
                            break;
                        }
                        found |= self.explore(w, SmallVec::from_slice(&[t]));
                    }
                }
            }
        }

        self.on_path[v as usize] = false;
        let frame = self.frames.pop().expect("own frame");
        debug_assert_eq!(frame.v, v);
        self.rec.emit(TraceEvent::Pop(v));
        let depth_tag = self.frames.len() as u32 + 1;
        if found {
            self.rec.emit(TraceEvent::Unblock(v));
            self.bar.unblock(self.g, env.lo, env.hi, v, 0, depth_tag, self.counters);
        } else {
            let raised = self.l - d + 1;
            if raised > self.bar.get(v) {
                self.bar.set(v, raised, depth_tag);
            }
        }
        found
    }

    fn report(&mut self, closing_ts: &[Timestamp]) {
        let vseq: Vec<VertexId> = self.frames.iter().map(|f| f.v).collect();
        let mut hop_ts: Vec<Vec<Timestamp>> =
            self.frames[1..].iter().map(|f| f.hop_ts.to_vec()).collect();
        hop_ts.push(closing_ts.to_vec());
        let bundle = CycleBundle { vseq, hop_ts, start_ts: self.env.t0 };
        let count = bundle_count(&bundle, self.shard.bundle_mode);
        self.rec.emit(TraceEvent::Report);
        self.shard.report(bundle, count);
    }
}

/// Lowers the barrier of `v` to `new_bar` and relaxes everything that can
/// reach `v` inside the window.
pub fn barrier_unblock(
    g: &TemporalGraph,
    bar: &mut Barriers,
    lo: Timestamp,
    hi: Timestamp,
    v: VertexId,
    new_bar: u32,
    depth: u32,
    counters: &mut VisitCounters,
) {
    bar.unblock(g, lo, hi, v, new_bar, depth, counters);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_adversarial, AdversarialFamily, TemporalGraph};
    use crate::seq::tiernan::oracle_set;
    use crate::sink::{SinkMode, SinkShard};

    fn run(g: &TemporalGraph, c: &Constraints) -> SinkShard {
        let mut shard = SinkShard::new(SinkMode::Collect, c.bundle_mode());
        hop_johnson_enumerate(g, c, &mut shard, &mut Recorder::disabled()).unwrap();
        shard
    }

    #[test]
    fn triangle_needs_three_hops() {
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 0), (1, 2, 0), (2, 0, 0)], 3);
        assert_eq!(run(&g, &Constraints::hop(2, None)).cycles, 0);
        assert_eq!(run(&g, &Constraints::hop(3, None)).cycles, 1);
    }

    #[test]
    fn rejects_l_below_two() {
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 0), (1, 0, 0)], 2);
        let mut shard = SinkShard::new(SinkMode::Count, crate::bundle::BundleMode::Simple);
        let err = hop_johnson_enumerate(
            &g,
            &Constraints::hop(1, None),
            &mut shard,
            &mut Recorder::disabled(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn exp_cycles_l3_has_five() {
        // cycles have 2 + |subset| edges; L = 3 admits |subset| <= 1
        let g = generate_adversarial(AdversarialFamily::ExpCycles { n: 6 }).unwrap();
        let shard = run(&g, &Constraints::hop(3, None));
        assert_eq!(shard.cycles, 5);
    }

    #[test]
    fn matches_length_filtered_oracle() {
        let g = TemporalGraph::from_dense_edges(
            &[
                (0, 1, 1),
                (1, 2, 2),
                (2, 0, 3),
                (2, 3, 1),
                (3, 0, 2),
                (1, 0, 5),
                (3, 1, 4),
                (0, 2, 2),
            ],
            4,
        );
        for l in [2u32, 3, 4, 8] {
            for delta in [None, Some(crate::pruning::WindowConstraint::new(2))] {
                let c = Constraints::hop(l, delta);
                let shard = run(&g, &c);
                assert_eq!(shard.canonical_set(), oracle_set(&g, &c), "L {l} delta {delta:?}");
            }
        }
    }

    #[test]
    fn visits_monotone_in_hop_limit() {
        let g = generate_adversarial(AdversarialFamily::ExpCycles { n: 8 }).unwrap();
        let mut prev = u64::MAX;
        for l in [8u32, 6, 4, 3, 2] {
            let c = Constraints::hop(l, None);
            let mut shard = SinkShard::new(SinkMode::Count, c.bundle_mode());
            let counters =
                hop_johnson_enumerate(&g, &c, &mut shard, &mut Recorder::disabled()).unwrap();
            assert!(
                counters.edge_visits <= prev,
                "L {l}: visits {} > previous {prev}",
                counters.edge_visits
            );
            prev = counters.edge_visits;
        }
    }
}

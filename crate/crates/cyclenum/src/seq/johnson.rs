//! Sequential Johnson enumerator for simple cycles.
//!
//! Vertices are blocked on visit. When a subtree finds a cycle the vertex is
//! recursively unblocked on the way out; otherwise it is parked on the
//! unblock list of each admissible neighbour, to be released only when one of
//! them unblocks. Windowed runs use the start-edge partition; unwindowed runs
//! use the classic per-vertex `id > v0` guard.

use smallvec::SmallVec;

use crate::bundle::{bundle_count, CycleBundle};
use crate::error::EnumError;
use crate::graph::{TemporalGraph, Timestamp};
use crate::metrics::VisitCounters;
use crate::pruning::MaskScratch;
use crate::search::{start_units, Constraints, Mode, StartEnv};
use crate::sink::SinkShard;
use crate::state::JohnsonState;
use crate::trace::{Recorder, TraceEvent};

pub fn johnson_enumerate(
    g: &TemporalGraph,
    c: &Constraints,
    shard: &mut SinkShard,
    rec: &mut Recorder,
) -> Result<VisitCounters, EnumError> {
    c.validate()?;
    if c.mode != Mode::Simple {
        return Err(EnumError::Incompatible(
            "johnson_enumerate handles simple mode; temporal and hop variants are separate"
                .into(),
        ));
    }
    let mut counters = VisitCounters::default();
    let mut scratch = MaskScratch::default();
    let mut st = JohnsonState::new(g.vertex_count());
    for unit in start_units(g, c) {
        let Some(env) = StartEnv::resolve(g, c, &unit, &mut scratch) else {
            continue;
        };
        let mut run = Run { g, env: &env, st: &mut st, shard, counters: &mut counters, rec };
        run.root();
        st.reset();
    }
    Ok(counters)
}

struct Run<'a> {
    g: &'a TemporalGraph,
    env: &'a StartEnv,
    st: &'a mut JohnsonState,
    shard: &'a mut SinkShard,
    counters: &'a mut VisitCounters,
    rec: &'a mut Recorder,
}

impl Run<'_> {
    fn root(&mut self) {
        let env = self.env;
        self.st.push(env.v0, SmallVec::new());
        self.rec.emit(TraceEvent::Push(env.v0));
        self.counters.vertex();
        self.counters.edge(env.first_ts.len() as u64);
        if env.bundles {
            self.circuit(env.first, env.first_ts.clone());
        } else {
            for i in 0..env.first_ts.len() {
                if self.st.blk[env.first as usize] {
                    break;
                }
                let t = env.first_ts[i];
                self.circuit(env.first, SmallVec::from_slice(&[t]));
            }
        }
        let popped = self.st.pop().expect("root frame");
        self.rec.emit(TraceEvent::Pop(popped.v));
    }

    fn circuit(&mut self, v: u32, hop_ts: SmallVec<[Timestamp; 4]>) -> bool {
        self.st.push(v, hop_ts);
        self.rec.emit(TraceEvent::Push(v));
        self.counters.vertex();
        let mut found = false;

        for grp in self.g.out_groups(v) {
            let ts = self.env.admissible_ts(v, &grp.ts);
            if ts.is_empty() {
                continue;
            }
            self.counters.edge(ts.len() as u64);
            let w = grp.nbr;
            if w == self.env.v0 {
                self.report(ts);
                found = true;
            } else if self.env.enterable(w) && !self.st.blk[w as usize] {
                if self.env.bundles {
                    found |= self.circuit(w, SmallVec::from_slice(ts));
                } else {
                    for &t in ts {
                        if self.st.blk[w as usize] {
                            break;
                        }
                        found |= self.circuit(w, SmallVec::from_slice(&[t]));
                    }
                }
            }
        }

        let popped = self.st.pop().expect("own frame");
        debug_assert_eq!(popped.v, v);
        self.rec.emit(TraceEvent::Pop(v));
        if found {
            self.rec.emit(TraceEvent::Unblock(v));
            self.st.recursive_unblock(v, self.counters);
        } else {
            for grp in self.g.out_groups(v) {
                if grp.nbr != self.env.v0
                    && self.env.enterable(grp.nbr)
                    && !self.env.admissible_ts(v, &grp.ts).is_empty()
                {
                    self.st.register_blist(grp.nbr, v);
                }
            }
        }
        found
    }

    fn report(&mut self, closing_ts: &[Timestamp]) {
        let vseq: Vec<u32> = self.st.pi.iter().map(|f| f.v).collect();
        let mut hop_ts: Vec<Vec<Timestamp>> =
            self.st.pi[1..].iter().map(|f| f.hop_ts.to_vec()).collect();
        hop_ts.push(closing_ts.to_vec());
        let bundle = CycleBundle { vseq, hop_ts, start_ts: self.env.t0 };
        let count = bundle_count(&bundle, self.shard.bundle_mode);
        self.rec.emit(TraceEvent::Report);
        self.shard.report(bundle, count);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_adversarial, AdversarialFamily, TemporalGraph};
    use crate::seq::tiernan::oracle_set;
    use crate::sink::{SinkMode, SinkShard};

    fn run(g: &TemporalGraph, c: &Constraints) -> (SinkShard, VisitCounters) {
        let mut shard = SinkShard::new(SinkMode::Collect, c.bundle_mode());
        let counters =
            johnson_enumerate(g, c, &mut shard, &mut Recorder::disabled()).unwrap();
        (shard, counters)
    }

    #[test]
    fn triangle_has_one_cycle() {
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 1), (1, 2, 2), (2, 0, 3)], 3);
        let (shard, _) = run(&g, &Constraints::simple());
        assert_eq!(shard.cycles, 1);
        let set = shard.canonical_set();
        assert_eq!(set.iter().next().unwrap().vseq, vec![0, 1, 2]);
    }

    #[test]
    fn exp_cycles_counts() {
        for n in [3usize, 6, 10] {
            let g = generate_adversarial(AdversarialFamily::ExpCycles { n }).unwrap();
            let (shard, _) = run(&g, &Constraints::simple());
            assert_eq!(shard.cycles, 1u64 << (n - 2), "n = {n}");
        }
    }

    #[test]
    fn empty_graph_zero_cycles_zero_visits() {
        let g = TemporalGraph::from_dense_edges(&[], 0);
        let (shard, counters) = run(&g, &Constraints::simple());
        assert_eq!(shard.cycles, 0);
        assert_eq!(counters.edge_visits, 0);
    }

    #[test]
    fn blocked_tail_beats_tiernan_on_visits() {
        let g =
            generate_adversarial(AdversarialFamily::BlockedTail { m: 2, k: 5 }).unwrap();
        let c = Constraints::simple();
        let (j_shard, j_counters) = run(&g, &c);
        let mut t_shard = SinkShard::new(SinkMode::Collect, c.bundle_mode());
        let t_counters = tiernan_enumerate(&g, &c, &mut t_shard).unwrap();
        assert_eq!(j_shard.canonical_set(), t_shard.canonical_set());
        assert!(
            j_counters.edge_visits < t_counters.edge_visits,
            "johnson {} vs tiernan {}",
            j_counters.edge_visits,
            t_counters.edge_visits
        );
    }

    #[test]
    fn windowed_simple_matches_oracle() {
        let g = TemporalGraph::from_dense_edges(
            &[(0, 1, 1), (1, 2, 2), (2, 0, 3), (1, 0, 2), (2, 1, 5), (0, 2, 4)],
            3,
        );
        for delta in [0, 1, 2, 5] {
            let c = Constraints::simple_windowed(delta);
            let (shard, _) = run(&g, &c);
            assert_eq!(shard.canonical_set(), oracle_set(&g, &c), "delta {delta}");
        }
    }

    use crate::seq::tiernan::tiernan_enumerate;
}

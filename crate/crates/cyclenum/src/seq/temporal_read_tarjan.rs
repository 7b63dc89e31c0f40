//! Sequential temporal-cycle Read-Tarjan: path extensions found by a DFS
//! that honours strictly increasing timestamps, with blocking done through
//! closing times scoped to the extension exploration that wrote them.
//! Closing-time writes are journalled with the call depth so a call can
//! restore exactly the state it inherited; no unblock cascade is needed.

use smallvec::SmallVec;

use crate::bundle::{bundle_count, CycleBundle};
use crate::error::EnumError;
use crate::graph::{TemporalGraph, Timestamp, VertexId};
use crate::metrics::VisitCounters;
use crate::pruning::MaskScratch;
use crate::search::{start_units, Constraints, Mode, StartEnv};
use crate::sink::SinkShard;
use crate::trace::{Recorder, TraceEvent};

pub fn temporal_read_tarjan_enumerate(
    g: &TemporalGraph,
    c: &Constraints,
    shard: &mut SinkShard,
    rec: &mut Recorder,
) -> Result<VisitCounters, EnumError> {
    c.validate()?;
    if c.mode != Mode::Temporal {
        return Err(EnumError::Incompatible(
            "temporal_read_tarjan_enumerate requires temporal mode".into(),
        ));
    }
    let mut counters = VisitCounters::default();
    let mut scratch = MaskScratch::default();
    let n = g.vertex_count();
    let mut run = Run {
        g,
        env: None,
        strict: c.strict_temporal,
        pi: Vec::new(),
        on_path: vec![false; n],
        ct: vec![Timestamp::MAX; n],
        journal: Vec::new(),
        vis_arr: vec![Timestamp::MAX; n],
        vis_list: Vec::new(),
        counters: &mut counters,
        rec,
    };
    for unit in start_units(g, c) {
        let Some(env) = StartEnv::resolve(g, c, &unit, &mut scratch) else {
            continue;
        };
        run.env = Some(env);
        run.start(shard);
        run.reset();
    }
    Ok(counters)
}

struct TrtFrame {
    v: VertexId,
    hop_ts: SmallVec<[Timestamp; 4]>,
    /// Minimum feasible arrival over the hop list.
    arrival: Timestamp,
    /// Closing time of `v` before this push; gates this frame's own probes.
    saved_ct: Timestamp,
}

struct Ext {
    steps: Vec<(VertexId, SmallVec<[Timestamp; 4]>)>,
    closing: SmallVec<[Timestamp; 4]>,
    cursor: usize,
}

impl Ext {
    fn next_vertex(&self) -> Option<VertexId> {
        self.steps.get(self.cursor).map(|s| s.0)
    }

    fn exhausted(&self) -> bool {
        self.cursor >= self.steps.len()
    }
}

struct Run<'a> {
    g: &'a TemporalGraph,
    env: Option<StartEnv>,
    strict: bool,
    pi: Vec<TrtFrame>,
    on_path: Vec<bool>,
    ct: Vec<Timestamp>,
    /// (vertex, previous value, depth); restoring a depth suffix undoes a
    /// call's writes exactly.
    journal: Vec<(VertexId, Timestamp, u32)>,
    vis_arr: Vec<Timestamp>,
    vis_list: Vec<VertexId>,
    counters: &'a mut VisitCounters,
    rec: &'a mut Recorder,
}

impl Run<'_> {
    fn env(&self) -> &StartEnv {
        self.env.as_ref().expect("start environment set")
    }

    fn reset(&mut self) {
        while let Some(f) = self.pi.pop() {
            self.on_path[f.v as usize] = false;
        }
        while let Some((v, old, _)) = self.journal.pop() {
            self.ct[v as usize] = old;
        }
        debug_assert!(self.vis_list.is_empty());
    }

    fn write_ct(&mut self, v: VertexId, val: Timestamp, depth: u32) {
        self.journal.push((v, self.ct[v as usize], depth));
        self.ct[v as usize] = val;
    }

    fn purge_from_depth(&mut self, d: u32) {
        while let Some(&(v, old, depth)) = self.journal.last() {
            if depth < d {
                break;
            }
            self.ct[v as usize] = old;
            self.journal.pop();
        }
    }

    /// Entry at arrival `a` is dead when no outgoing timestamp can both
    /// follow it and precede the closing time.
    #[inline]
    fn entry_blocked(&self, w: VertexId, a: Timestamp) -> bool {
        self.on_path[w as usize] || a.saturating_add(1) >= self.ct[w as usize]
    }

    /// Admissible timestamps of one group scanned from `v`: window and
    /// tie-break via the environment, then temporal order after `arrival`,
    /// then the closing-time gate of the scanning frame.
    fn slice<'t>(
        &self,
        v: VertexId,
        ts: &'t [Timestamp],
        arrival: Timestamp,
        gate: Timestamp,
    ) -> &'t [Timestamp] {
        let env = self.env();
        let base = env.admissible_ts(v, ts);
        let from = if self.strict {
            base.partition_point(|&t| t <= arrival)
        } else {
            base.partition_point(|&t| t < arrival)
        };
        let to = base.partition_point(|&t| t < gate.min(env.hi.saturating_add(1)));
        if from >= to {
            &[]
        } else {
            &base[from..to]
        }
    }

    fn start(&mut self, shard: &mut SinkShard) {
        let env = self.env();
        let v0 = env.v0;
        let first = env.first;
        let first_ts = env.first_ts.clone();
        let t0 = env.t0;
        let hi = env.hi;
        self.pi.push(TrtFrame {
            v: v0,
            hop_ts: SmallVec::new(),
            arrival: t0,
            saved_ct: self.ct[v0 as usize],
        });
        self.on_path[v0 as usize] = true;
        self.write_ct(v0, hi.saturating_add(1), 0);
        self.rec.emit(TraceEvent::Push(v0));
        self.counters.vertex();
        self.counters.edge(first_ts.len() as u64);
        if let Some(ext) = self.dfs_top(first, first_ts, t0, 0) {
            self.explore(v0, ext, 1, shard);
        }
    }

    fn rewind_to(&mut self, anchor: VertexId) {
        while self.pi.last().map(|f| f.v) != Some(anchor) {
            let f = self.pi.pop().expect("anchor on path");
            self.on_path[f.v as usize] = false;
            self.rec.emit(TraceEvent::Pop(f.v));
        }
    }

    fn explore(&mut self, anchor: VertexId, mut ext: Ext, d: u32, shard: &mut SinkShard) {
        self.rewind_to(anchor);
        self.purge_from_depth(d);
        let env_v0 = self.env().v0;
        let mut found = false;

        while !ext.exhausted() {
            let (v, hop) = ext.steps[ext.cursor].clone();
            ext.cursor += 1;
            let arrival = hop[0];
            let saved = self.ct[v as usize];
            self.pi.push(TrtFrame { v, hop_ts: hop, arrival, saved_ct: saved });
            self.on_path[v as usize] = true;
            self.write_ct(v, arrival.saturating_add(1), d);
            self.rec.emit(TraceEvent::Push(v));
            self.counters.vertex();

            let exclude = ext.next_vertex().unwrap_or(env_v0);
            for gi in 0..self.g.out_groups(v).len() {
                let grp = &self.g.out_groups(v)[gi];
                let w = grp.nbr;
                if w == exclude {
                    continue;
                }
                let sub = self.slice(v, &grp.ts, arrival, saved);
                if sub.is_empty() {
                    continue;
                }
                self.counters.edge(sub.len() as u64);
                let sub: SmallVec<[Timestamp; 4]> = SmallVec::from_slice(sub);
                if w == env_v0 {
                    found = true;
                    let child = Ext { steps: Vec::new(), closing: sub, cursor: 0 };
                    self.run_child(v, child, d, shard);
                } else if !self.entry_blocked(w, sub[0]) && self.env().enterable(w) {
                    if let Some(child) = self.dfs_top(w, sub, arrival, d) {
                        found = true;
                        self.run_child(v, child, d, shard);
                    }
                }
            }
            if found {
                break;
            }
        }

        if ext.exhausted() {
            self.report(&ext.closing, shard);
        } else {
            let v = self.pi.last().map(|f| f.v).expect("walk pushed a vertex");
            self.run_child(v, ext, d, shard);
        }
    }

    fn run_child(&mut self, anchor: VertexId, ext: Ext, d: u32, shard: &mut SinkShard) {
        self.explore(anchor, ext, d + 1, shard);
        self.rewind_to(anchor);
        self.purge_from_depth(d + 1);
    }

    fn report(&mut self, closing: &[Timestamp], shard: &mut SinkShard) {
        debug_assert!(!closing.is_empty());
        let vseq: Vec<VertexId> = self.pi.iter().map(|f| f.v).collect();
        let mut hop_ts: Vec<Vec<Timestamp>> =
            self.pi[1..].iter().map(|f| f.hop_ts.to_vec()).collect();
        hop_ts.push(closing.to_vec());
        let bundle = CycleBundle { vseq, hop_ts, start_ts: self.env().t0 };
        let count = bundle_count(&bundle, shard.bundle_mode);
        debug_assert!(count > 0);
        if count > 0 {
            self.rec.emit(TraceEvent::Report);
            shard.report(bundle, count);
        }
    }

    /// Extension DFS entered at `u` through the hop list `hop` (minimum
    /// feasible arrival `hop[0]`, preceded by `prev_arrival`). Returns the
    /// first extension in adjacency order; a failed call marks every visited
    /// (vertex, arrival) as dead from that arrival on.
    fn dfs_top(
        &mut self,
        u: VertexId,
        hop: SmallVec<[Timestamp; 4]>,
        prev_arrival: Timestamp,
        d: u32,
    ) -> Option<Ext> {
        debug_assert!(self.vis_list.is_empty());
        let _ = prev_arrival;
        let res = self.dfs(u, hop, d);
        if res.is_none() {
            for i in 0..self.vis_list.len() {
                let v = self.vis_list[i];
                let dead_from = self.vis_arr[v as usize].saturating_add(1);
                if dead_from < self.ct[v as usize] {
                    self.write_ct(v, dead_from, d);
                }
            }
        }
        for &v in &self.vis_list {
            self.vis_arr[v as usize] = Timestamp::MAX;
        }
        self.vis_list.clear();
        res
    }

    fn dfs(&mut self, u: VertexId, hop: SmallVec<[Timestamp; 4]>, d: u32) -> Option<Ext> {
        self.counters.dfs();
        self.counters.vertex();
        let arrival = hop[0];
        if arrival < self.vis_arr[u as usize] {
            if self.vis_arr[u as usize] == Timestamp::MAX {
                self.vis_list.push(u);
            }
            self.vis_arr[u as usize] = arrival;
        }
        let env_v0 = self.env().v0;
        let gate = self.ct[u as usize];
        let mut all_blocked = true;

        for gi in 0..self.g.out_groups(u).len() {
            let grp = &self.g.out_groups(u)[gi];
            let w = grp.nbr;
            let sub = self.slice(u, &grp.ts, arrival, gate);
            if sub.is_empty() {
                continue;
            }
            self.counters.edge(sub.len() as u64);
            if w == env_v0 {
                return Some(Ext {
                    steps: vec![(u, hop)],
                    closing: SmallVec::from_slice(sub),
                    cursor: 0,
                });
            }
            if !self.env().enterable(w) {
                continue;
            }
            let sub: SmallVec<[Timestamp; 4]> = SmallVec::from_slice(sub);
            let a_w = sub[0];
            if !self.entry_blocked(w, a_w) {
                if a_w < self.vis_arr[w as usize] {
                    if let Some(mut ext) = self.dfs(w, sub, d) {
                        ext.steps.insert(0, (u, hop));
                        return Some(ext);
                    }
                }
                if !self.entry_blocked(w, a_w) {
                    all_blocked = false;
                }
            }
        }

        if all_blocked {
            let dead_from = arrival.saturating_add(1);
            if dead_from < self.ct[u as usize] {
                self.write_ct(u, dead_from, d);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TemporalGraph;
    use crate::seq::tiernan::oracle_set;
    use crate::sink::{SinkMode, SinkShard};

    fn run(g: &TemporalGraph, c: &Constraints) -> SinkShard {
        let mut shard = SinkShard::new(SinkMode::Collect, c.bundle_mode());
        temporal_read_tarjan_enumerate(g, c, &mut shard, &mut Recorder::disabled()).unwrap();
        shard
    }

    #[test]
    fn two_hop_temporal_cycle() {
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 1), (1, 0, 2)], 2);
        assert_eq!(run(&g, &Constraints::temporal(None)).cycles, 1);
    }

    #[test]
    fn reversed_triangle_empty() {
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 3), (1, 2, 2), (2, 0, 1)], 3);
        assert_eq!(run(&g, &Constraints::temporal(None)).cycles, 0);
    }

    #[test]
    fn matches_oracle_with_parallel_edges() {
        let g = TemporalGraph::from_dense_edges(
            &[
                (0, 1, 1),
                (0, 1, 2),
                (1, 2, 2),
                (1, 2, 3),
                (2, 0, 4),
                (1, 0, 3),
                (2, 1, 5),
                (0, 2, 1),
            ],
            3,
        );
        for delta in [1, 3, 10] {
            let c = Constraints::temporal(Some(crate::pruning::WindowConstraint::new(delta)));
            assert_eq!(run(&g, &c).canonical_set(), oracle_set(&g, &c), "delta {delta}");
        }
    }
}

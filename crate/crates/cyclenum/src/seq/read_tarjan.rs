//! Sequential Read-Tarjan enumerator for simple cycles.
//!
//! Maintains a current path and explores one path extension per recursive
//! call: walk the extension, probe each walked vertex for alternate
//! extensions with a DFS, recurse per discovered extension, and report the
//! path as a cycle when the extension is exhausted without branching.
//!
//! Blocks carry the depth of the call that made them; a call starting at
//! depth `d` rewinds the path to its anchor and drops blocks tagged `>= d`,
//! which is what makes the calls order-independent. Three pruning options,
//! each independently toggleable:
//! * `fwd_blk` — child calls see blocks made by their ancestors instead of
//!   starting from path membership only,
//! * `fwd_ext` — hand the discovered extension to the child instead of
//!   letting it re-run the DFS,
//! * `blk_on_success` — block vertices whose admissible neighbours are all
//!   blocked even when the enclosing DFS succeeds.

use smallvec::SmallVec;

use crate::bundle::{bundle_count, CycleBundle};
use crate::error::EnumError;
use crate::graph::{TemporalGraph, Timestamp, VertexId};
use crate::metrics::VisitCounters;
use crate::pruning::MaskScratch;
use crate::search::{start_units, Constraints, Mode, StartEnv};
use crate::sink::SinkShard;
use crate::state::PathFrame;
use crate::trace::{Recorder, TraceEvent};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RtOpts {
    pub fwd_blk: bool,
    pub fwd_ext: bool,
    pub blk_on_success: bool,
}

impl Default for RtOpts {
    fn default() -> Self {
        RtOpts { fwd_blk: true, fwd_ext: true, blk_on_success: true }
    }
}

impl RtOpts {
    pub fn none() -> Self {
        RtOpts { fwd_blk: false, fwd_ext: false, blk_on_success: false }
    }

    /// All eight combinations, for differential sweeps.
    pub fn all_combinations() -> Vec<RtOpts> {
        let mut out = Vec::new();
        for fwd_blk in [false, true] {
            for fwd_ext in [false, true] {
                for blk_on_success in [false, true] {
                    out.push(RtOpts { fwd_blk, fwd_ext, blk_on_success });
                }
            }
        }
        out
    }
}

/// A path extension: vertices still to walk (with their hop bundles) and the
/// closing hop back to the start vertex.
#[derive(Debug, Clone)]
pub struct Ext {
    pub steps: Vec<(VertexId, SmallVec<[Timestamp; 4]>)>,
    pub closing: SmallVec<[Timestamp; 4]>,
    pub cursor: usize,
}

impl Ext {
    pub fn next_vertex(&self) -> Option<VertexId> {
        self.steps.get(self.cursor).map(|s| s.0)
    }

    pub fn exhausted(&self) -> bool {
        self.cursor >= self.steps.len()
    }
}

/// Work handed to a child call: either a ready extension or, with
/// `fwd_ext` off, the branch vertex to re-run the DFS from.
#[derive(Debug, Clone)]
pub enum ChildJob {
    Ready(Ext),
    Recompute { from: VertexId, hop: SmallVec<[Timestamp; 4]> },
}

pub fn read_tarjan_enumerate(
    g: &TemporalGraph,
    c: &Constraints,
    opts: RtOpts,
    shard: &mut SinkShard,
    rec: &mut Recorder,
) -> Result<VisitCounters, EnumError> {
    c.validate()?;
    if c.mode != Mode::Simple {
        return Err(EnumError::Incompatible(
            "read_tarjan_enumerate handles simple mode; the temporal variant is separate".into(),
        ));
    }
    let mut counters = VisitCounters::default();
    let mut scratch = MaskScratch::default();
    let n = g.vertex_count();
    let mut run = Run {
        g,
        env: None,
        opts,
        pi: Vec::new(),
        on_path: vec![false; n],
        blk: vec![false; n],
        blk_depth: vec![0; n],
        journal: Vec::new(),
        vis: vec![false; n],
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

struct Run<'a> {
    g: &'a TemporalGraph,
    env: Option<StartEnv>,
    opts: RtOpts,
    pi: Vec<PathFrame>,
    on_path: Vec<bool>,
    blk: Vec<bool>,
    blk_depth: Vec<u32>,
    /// Journal of blocks in insertion order; depths form a stack discipline,
    /// so dropping a depth suffix is a truncation.
    journal: Vec<(VertexId, u32)>,
    vis: Vec<bool>,
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
        while let Some((v, _)) = self.journal.pop() {
            self.blk[v as usize] = false;
        }
        debug_assert!(self.vis_list.is_empty());
    }

    fn start(&mut self, shard: &mut SinkShard) {
        let env = self.env();
        let v0 = env.v0;
        let first = env.first;
        let first_ts = env.first_ts.clone();
        self.push(v0, SmallVec::new());
        self.block(v0, 0);
        self.counters.edge(first_ts.len() as u64);
        if let Some(ext) = self.dfs_top(first, first_ts, 0) {
            self.explore(v0, ChildJob::Ready(ext), 1, shard);
        }
    }

    fn push(&mut self, v: VertexId, hop_ts: SmallVec<[Timestamp; 4]>) {
        self.pi.push(PathFrame { v, hop_ts });
        self.on_path[v as usize] = true;
        self.rec.emit(TraceEvent::Push(v));
        self.counters.vertex();
    }

    fn rewind_to(&mut self, anchor: VertexId) {
        while self.pi.last().map(|f| f.v) != Some(anchor) {
            let f = self.pi.pop().expect("anchor on path");
            self.on_path[f.v as usize] = false;
            self.rec.emit(TraceEvent::Pop(f.v));
        }
    }

    fn block(&mut self, v: VertexId, depth: u32) {
        if !self.blk[v as usize] {
            self.blk[v as usize] = true;
            self.blk_depth[v as usize] = depth;
            self.journal.push((v, depth));
        }
    }

    /// Is `w` blocked from the point of view of a call at depth `d`?
    #[inline]
    fn blocked_for(&self, w: VertexId, d: u32) -> bool {
        if self.on_path[w as usize] {
            return true;
        }
        self.blk[w as usize] && (self.opts.fwd_blk || self.blk_depth[w as usize] == d)
    }

    fn purge_from_depth(&mut self, d: u32) {
        while let Some(&(v, depth)) = self.journal.last() {
            if depth < d {
                break;
            }
            self.blk[v as usize] = false;
            self.journal.pop();
        }
    }

    /// One path-extension exploration (one task of the parallel variant).
    fn explore(&mut self, anchor: VertexId, job: ChildJob, d: u32, shard: &mut SinkShard) {
        self.rewind_to(anchor);
        self.purge_from_depth(d);
        let mut ext = match job {
            ChildJob::Ready(e) => e,
            ChildJob::Recompute { from, hop } => match self.dfs_top(from, hop, d) {
                Some(e) => e,
                None => return,
            },
        };
        let env_v0 = self.env().v0;
        let mut found = false;

        while !ext.exhausted() {
            let (v, hop) = ext.steps[ext.cursor].clone();
            ext.cursor += 1;
            self.push(v, hop);
            self.block(v, d);

            let exclude = ext.next_vertex().unwrap_or(env_v0);
            for gi in 0..self.g.out_groups(v).len() {
                let grp = &self.g.out_groups(v)[gi];
                let w = grp.nbr;
                if w == exclude {
                    continue;
                }
                let sub = self.env().admissible_ts(v, &grp.ts);
                if sub.is_empty() {
                    continue;
                }
                self.counters.edge(sub.len() as u64);
                let sub: SmallVec<[Timestamp; 4]> = SmallVec::from_slice(sub);
                if w == env_v0 {
                    // the direct closing edge is its own one-step extension
                    found = true;
                    let child = Ext { steps: Vec::new(), closing: sub, cursor: 0 };
                    self.run_child(v, ChildJob::Ready(child), d, shard);
                } else if !self.blocked_for(w, d) && self.env().enterable(w) {
                    if let Some(child) = self.dfs_top(w, sub.clone(), d) {
                        found = true;
                        let job = if self.opts.fwd_ext {
                            ChildJob::Ready(child)
                        } else {
                            ChildJob::Recompute { from: w, hop: sub }
                        };
                        self.run_child(v, job, d, shard);
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
            self.run_child(v, ChildJob::Ready(ext), d, shard);
        }
    }

    /// Runs a child call inline and restores this call's view of the state.
    fn run_child(&mut self, anchor: VertexId, job: ChildJob, d: u32, shard: &mut SinkShard) {
        self.explore(anchor, job, d + 1, shard);
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
        self.rec.emit(TraceEvent::Report);
        shard.report(bundle, count);
    }

    /// Top-level extension DFS from `u` (entered through `hop`): returns the
    /// first extension found in adjacency order. An unsuccessful call blocks
    /// everything it visited.
    fn dfs_top(
        &mut self,
        u: VertexId,
        hop: SmallVec<[Timestamp; 4]>,
        d: u32,
    ) -> Option<Ext> {
        debug_assert!(self.vis_list.is_empty());
        let res = self.dfs(u, hop, d);
        if res.is_none() {
            for i in 0..self.vis_list.len() {
                let v = self.vis_list[i];
                self.block(v, d);
            }
        }
        for &v in &self.vis_list {
            self.vis[v as usize] = false;
        }
        self.vis_list.clear();
        res
    }

    fn dfs(&mut self, u: VertexId, hop: SmallVec<[Timestamp; 4]>, d: u32) -> Option<Ext> {
        self.counters.dfs();
        self.counters.vertex();
        self.vis[u as usize] = true;
        self.vis_list.push(u);
        let env_v0 = self.env().v0;
        let mut all_blocked = true;

        for gi in 0..self.g.out_groups(u).len() {
            let grp = &self.g.out_groups(u)[gi];
            let w = grp.nbr;
            let sub = self.env().admissible_ts(u, &grp.ts);
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
            if !self.blocked_for(w, d) {
                if !self.vis[w as usize] {
                    if let Some(mut ext) = self.dfs(w, sub, d) {
                        ext.steps.insert(0, (u, hop));
                        return Some(ext);
                    }
                }
                if !self.blocked_for(w, d) {
                    all_blocked = false;
                }
            }
        }

        if self.opts.blk_on_success && all_blocked {
            self.block(u, d);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_adversarial, AdversarialFamily, TemporalGraph};
    use crate::seq::tiernan::oracle_set;
    use crate::sink::{SinkMode, SinkShard};

    fn run(g: &TemporalGraph, c: &Constraints, opts: RtOpts) -> (SinkShard, VisitCounters) {
        let mut shard = SinkShard::new(SinkMode::Collect, c.bundle_mode());
        let counters =
            read_tarjan_enumerate(g, c, opts, &mut shard, &mut Recorder::disabled()).unwrap();
        (shard, counters)
    }

    #[test]
    fn triangle_one_cycle_every_opts() {
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 0), (1, 2, 0), (2, 0, 0)], 3);
        for opts in RtOpts::all_combinations() {
            let (shard, _) = run(&g, &Constraints::simple(), opts);
            assert_eq!(shard.cycles, 1, "opts {opts:?}");
        }
    }

    #[test]
    fn exp_cycles_counts_all_opts() {
        let g = generate_adversarial(AdversarialFamily::ExpCycles { n: 6 }).unwrap();
        for opts in RtOpts::all_combinations() {
            let (shard, _) = run(&g, &Constraints::simple(), opts);
            assert_eq!(shard.cycles, 16, "opts {opts:?}");
        }
    }

    #[test]
    fn matches_oracle_on_mixed_graph() {
        let g = TemporalGraph::from_dense_edges(
            &[
                (0, 1, 1),
                (1, 2, 2),
                (2, 0, 3),
                (1, 0, 2),
                (2, 1, 5),
                (0, 2, 4),
                (2, 3, 1),
                (3, 0, 2),
            ],
            4,
        );
        for opts in RtOpts::all_combinations() {
            for c in [Constraints::simple(), Constraints::simple_windowed(3)] {
                let (shard, _) = run(&g, &c, opts);
                assert_eq!(shard.canonical_set(), oracle_set(&g, &c), "opts {opts:?}");
            }
        }
    }

    #[test]
    fn fwd_blk_reduces_visits_on_nested_branches() {
        // branch children re-probe the long dead-at-probe tail unless the
        // parent's blocks are forwarded
        let g = crate::corpus::pruning_showcase(6, 20);
        let c = Constraints::simple();
        let (s_on, on) = run(&g, &c, RtOpts::default());
        let (s_off, off) = run(&g, &c, RtOpts { fwd_blk: false, ..RtOpts::default() });
        assert_eq!(s_on.canonical_set(), s_off.canonical_set());
        assert!(
            on.edge_visits < off.edge_visits,
            "fwd_blk on {} vs off {}",
            on.edge_visits,
            off.edge_visits
        );
    }

    #[test]
    fn two_extensions_on_fig2a_shape() {
        // hub with one detour pair: two cycles through two extensions
        let g = generate_adversarial(AdversarialFamily::BlockedTail { m: 1, k: 2 }).unwrap();
        let (shard, _) = run(&g, &Constraints::simple(), RtOpts::default());
        assert_eq!(shard.cycles, 2);
    }
}

//! Brute-force baseline: explores every admissible simple path per start
//! unit with no blocking at all. Exponentially slow in the worst case, but
//! obviously correct, which makes it the differential oracle for every other
//! enumerator. Parallel edges are walked one instance at a time; pruning
//! masks are deliberately not used.

use std::collections::BTreeSet;

use crate::bundle::{CycleBundle, CycleRecord};
use crate::error::EnumError;
use crate::graph::{TemporalGraph, Timestamp, VertexId};
use crate::metrics::VisitCounters;
use crate::pruning::MaskScratch;
use crate::search::{start_units, Constraints, Mode, Prune, StartEnv};
use crate::sink::{SinkMode, SinkShard};

pub fn tiernan_enumerate(
    g: &TemporalGraph,
    c: &Constraints,
    shard: &mut SinkShard,
) -> Result<VisitCounters, EnumError> {
    c.validate()?;
    let c = Constraints { prune: Prune::None, ..c.clone() };
    let mut counters = VisitCounters::default();
    let mut scratch = MaskScratch::default();
    let mut on_path = vec![false; g.vertex_count()];
    let mut walk = Walk {
        g,
        vseq: Vec::new(),
        ts: Vec::new(),
        on_path: &mut on_path,
        strict: c.strict_temporal,
        mode: c.mode,
    };
    for unit in start_units(g, &c) {
        let Some(env) = StartEnv::resolve(g, &c, &unit, &mut scratch) else {
            continue;
        };
        walk.vseq.push(env.v0);
        walk.on_path[env.v0 as usize] = true;
        for i in 0..env.first_ts.len() {
            let t = env.first_ts[i];
            counters.edge(1);
            walk.step(&env, env.first, t, &mut counters, shard);
        }
        walk.on_path[env.v0 as usize] = false;
        walk.vseq.pop();
    }
    Ok(counters)
}

struct Walk<'a> {
    g: &'a TemporalGraph,
    /// Path vertices including the start vertex.
    vseq: Vec<VertexId>,
    /// Chosen hop timestamps, one per edge walked so far.
    ts: Vec<Timestamp>,
    on_path: &'a mut [bool],
    strict: bool,
    mode: Mode,
}

impl Walk<'_> {
    /// Takes the edge instance `(last vertex -> v, t)` and keeps extending.
    fn step(
        &mut self,
        env: &StartEnv,
        v: VertexId,
        t: Timestamp,
        counters: &mut VisitCounters,
        shard: &mut SinkShard,
    ) {
        self.vseq.push(v);
        self.ts.push(t);
        self.on_path[v as usize] = true;
        counters.vertex();

        let may_descend = match self.mode {
            Mode::Hop(l) => (self.vseq.len() as u32) < l,
            _ => true,
        };
        for grp in self.g.out_groups(v) {
            let admissible = env.admissible_ts(v, &grp.ts);
            if admissible.is_empty() {
                continue;
            }
            let w = grp.nbr;
            let closes = w == env.v0;
            if !closes && (self.on_path[w as usize] || !env.enterable(w) || !may_descend) {
                continue;
            }
            for &nt in admissible {
                counters.edge(1);
                if self.mode == Mode::Temporal {
                    let ok = if self.strict { nt > t } else { nt >= t };
                    if !ok {
                        continue;
                    }
                }
                if closes {
                    self.report(env, nt, shard);
                } else {
                    self.step(env, w, nt, counters, shard);
                }
            }
        }

        self.on_path[v as usize] = false;
        self.ts.pop();
        self.vseq.pop();
    }

    fn report(&mut self, env: &StartEnv, closing_ts: Timestamp, shard: &mut SinkShard) {
        if let Mode::Hop(l) = self.mode {
            if self.vseq.len() as u32 > l {
                return;
            }
        }
        let mut hop_ts: Vec<Vec<Timestamp>> = self.ts.iter().map(|&t| vec![t]).collect();
        hop_ts.push(vec![closing_ts]);
        shard.report(
            CycleBundle { vseq: self.vseq.clone(), hop_ts, start_ts: env.t0 },
            1,
        );
    }
}

/// Runs the oracle and returns the canonical expanded cycle set.
pub fn oracle_set(g: &TemporalGraph, c: &Constraints) -> BTreeSet<CycleRecord> {
    let mut shard = SinkShard::new(SinkMode::Collect, c.bundle_mode());
    tiernan_enumerate(g, c, &mut shard).expect("oracle run");
    shard.canonical_set()
}

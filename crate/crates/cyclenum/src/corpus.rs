//! Seeded random graphs and designed benchmark shapes used by the verifier
//! command and the test suites.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{TemporalGraph, Timestamp, VertexId};

/// Parameters for the random corpus: small dense-ish temporal multigraphs.
#[derive(Debug, Clone, Copy)]
pub struct CorpusParams {
    pub max_vertices: usize,
    pub edge_prob: f64,
    pub ts_max: Timestamp,
    /// Probability that an existing pair gains a parallel edge.
    pub parallel_prob: f64,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams { max_vertices: 10, edge_prob: 0.3, ts_max: 20, parallel_prob: 0.2 }
    }
}

/// Deterministic random temporal graph for a seed.
pub fn random_graph(seed: u64, p: &CorpusParams) -> TemporalGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(3..=p.max_vertices.max(3));
    let mut edges: Vec<(VertexId, VertexId, Timestamp)> = Vec::new();
    for s in 0..n {
        for d in 0..n {
            if s == d {
                continue;
            }
            if rng.random::<f64>() < p.edge_prob {
                let t = rng.random_range(0..=p.ts_max);
                edges.push((s as VertexId, d as VertexId, t));
                while rng.random::<f64>() < p.parallel_prob {
                    let t = rng.random_range(0..=p.ts_max);
                    edges.push((s as VertexId, d as VertexId, t));
                }
            }
        }
    }
    TemporalGraph::from_dense_edges(&edges, n)
}

/// Nested-branching shape that rewards blocked-set forwarding: a short spine
/// with `branches` alternate closings and a long in-component dead-at-probe
/// tail reachable from the spine and every closing vertex. Without
/// forwarding, every branch child re-walks the tail.
///
/// Layout: 0 -> 1 -> 2, 2 -> c_i -> 0 for each branch, 1 -> t_1,
/// c_i -> t_1, t_j -> t_{j+1}, t_m -> 1.
pub fn pruning_showcase(branches: usize, tail: usize) -> TemporalGraph {
    assert!(branches >= 1 && tail >= 2);
    let mut edges: Vec<(VertexId, VertexId, Timestamp)> = Vec::new();
    let c0 = 3u32;
    let t0 = c0 + branches as u32;
    edges.push((0, 1, 0));
    edges.push((1, 2, 0));
    edges.push((1, t0, 0));
    for i in 0..branches as u32 {
        edges.push((2, c0 + i, 0));
        edges.push((c0 + i, 0, 0));
        edges.push((c0 + i, t0, 0));
    }
    for j in 0..(tail as u32 - 1) {
        edges.push((t0 + j, t0 + j + 1, 0));
    }
    edges.push((t0 + tail as u32 - 1, 1, 0));
    TemporalGraph::from_dense_edges(&edges, (t0 + tail as u32) as usize)
}

/// Work-inflation shape: `detours` two-hop detours between a hub pair feed a
/// region with `diamonds` branching diamonds and no cycle, so every search
/// of the region is wasted work that blocking would normally share.
///
/// Layout: 0 -> 1, 1 -> u_i -> 2, 2 -> 0, 2 -> chain of diamonds
/// (a_j / b_j pairs), dead at the end.
pub fn work_inflation(detours: usize, diamonds: usize) -> TemporalGraph {
    assert!(detours >= 1 && diamonds >= 1);
    let mut edges: Vec<(VertexId, VertexId, Timestamp)> = Vec::new();
    let u0 = 3u32;
    let dia0 = u0 + detours as u32;
    edges.push((0, 1, 0));
    for i in 0..detours as u32 {
        edges.push((1, u0 + i, 0));
        edges.push((u0 + i, 2, 0));
    }
    edges.push((2, 0, 0));
    // diamond chain: head_j -> {a_j, b_j} -> head_{j+1}
    let mut head = 2u32;
    let mut next = dia0;
    for _ in 0..diamonds {
        let a = next;
        let b = next + 1;
        let tail = next + 2;
        edges.push((head, a, 0));
        edges.push((head, b, 0));
        edges.push((a, tail, 0));
        edges.push((b, tail, 0));
        head = tail;
        next += 3;
    }
    TemporalGraph::from_dense_edges(&edges, next as usize)
}

/// A skewed load-balance shape: the exponential-cycle core on the low ids
/// embedded in a sparse random background of `background` extra vertices.
pub fn embedded_exp_cycles(core_n: usize, background: usize, seed: u64) -> TemporalGraph {
    let core = crate::graph::generate_adversarial(crate::graph::AdversarialFamily::ExpCycles {
        n: core_n,
    })
    .expect("core params");
    let mut edges: Vec<(VertexId, VertexId, Timestamp)> =
        core.edges().map(|e| (e.src, e.dst, e.ts)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = core_n as u32;
    let hi = (core_n + background) as u32;
    // sparse background, average out-degree ~2
    for v in lo..hi {
        for _ in 0..2 {
            let w = rng.random_range(lo..hi);
            if w != v {
                edges.push((v, w, 0));
            }
        }
    }
    TemporalGraph::from_dense_edges(&edges, hi as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_graph_is_deterministic() {
        let a = random_graph(42, &CorpusParams::default());
        let b = random_graph(42, &CorpusParams::default());
        assert_eq!(a.to_edge_list(), b.to_edge_list());
        a.debug_validate().unwrap();
    }

    #[test]
    fn showcase_shapes_validate() {
        pruning_showcase(4, 6).debug_validate().unwrap();
        work_inflation(4, 5).debug_validate().unwrap();
        embedded_exp_cycles(6, 50, 1).debug_validate().unwrap();
    }
}

//! Directed temporal multigraph with bundle-grouped adjacency.
//!
//! Vertices are dense indices produced at ingestion time; the original ids are
//! kept for export. Adjacency is stored per vertex as a list of neighbour
//! groups, each group holding the sorted timestamps of all parallel edges to
//! that neighbour. Both out- and in-adjacency are materialised because the
//! constrained enumerators walk edges in both directions (unblock cascades run
//! against in-edges).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::BufRead;

use crate::error::GraphError;

/// Dense vertex index, `0..n`.
pub type VertexId = u32;

/// Edge timestamp in unitless ticks.
pub type Timestamp = i64;

/// A single directed temporal edge instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TemporalEdge {
    pub src: VertexId,
    pub dst: VertexId,
    pub ts: Timestamp,
}

/// One adjacency group: all parallel edges towards (or from) `nbr`,
/// timestamps sorted ascending. Duplicate timestamps are retained, one entry
/// per edge instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeGroup {
    pub nbr: VertexId,
    pub ts: Vec<Timestamp>,
}

/// Immutable directed temporal multigraph.
///
/// Invariants (checked by `debug_validate` and the ingestion tests):
/// * groups within an adjacency list are sorted by neighbour id,
/// * timestamps within a group are sorted ascending,
/// * every `(u, v, t)` in `out[u]` appears in `in_[v]` and vice versa.
#[derive(Debug, Clone)]
pub struct TemporalGraph {
    n: usize,
    edge_count: usize,
    out: Vec<Vec<EdgeGroup>>,
    in_: Vec<Vec<EdgeGroup>>,
    /// dense id -> original id from the input file.
    orig_ids: Vec<u64>,
    /// Number of self-loops dropped at ingestion.
    dropped_self_loops: u64,
}

/// Options for `load_edge_list`.
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Input lines carry no timestamp column; every edge gets ts = 0.
    pub untimed: bool,
}

impl TemporalGraph {
    /// Builds a graph from raw `(src, dst, ts)` triples using the original
    /// (arbitrary) vertex ids. Ids are remapped densely in first-seen order.
    /// Self-loops are dropped and counted.
    pub fn from_triples(triples: impl IntoIterator<Item = (u64, u64, Timestamp)>) -> Self {
        let mut map: HashMap<u64, VertexId> = HashMap::new();
        let mut orig_ids: Vec<u64> = Vec::new();
        let mut dense: Vec<(VertexId, VertexId, Timestamp)> = Vec::new();
        let mut dropped = 0u64;
        for (s, d, t) in triples {
            if s == d {
                dropped += 1;
                continue;
            }
            let mut id_of = |orig: u64| -> VertexId {
                *map.entry(orig).or_insert_with(|| {
                    let id = orig_ids.len() as VertexId;
                    orig_ids.push(orig);
                    id
                })
            };
            let s = id_of(s);
            let d = id_of(d);
            dense.push((s, d, t));
        }
        let n = orig_ids.len();
        let mut out: Vec<Vec<(VertexId, Timestamp)>> = vec![Vec::new(); n];
        let mut in_: Vec<Vec<(VertexId, Timestamp)>> = vec![Vec::new(); n];
        for &(s, d, t) in &dense {
            out[s as usize].push((d, t));
            in_[d as usize].push((s, t));
        }
        let group = |flat: Vec<Vec<(VertexId, Timestamp)>>| -> Vec<Vec<EdgeGroup>> {
            flat.into_iter()
                .map(|mut adj| {
                    adj.sort_unstable();
                    let mut groups: Vec<EdgeGroup> = Vec::new();
                    for (nbr, t) in adj {
                        match groups.last_mut() {
                            Some(g) if g.nbr == nbr => g.ts.push(t),
                            _ => groups.push(EdgeGroup { nbr, ts: vec![t] }),
                        }
                    }
                    groups
                })
                .collect()
        };
        TemporalGraph {
            n,
            edge_count: dense.len(),
            out: group(out),
            in_: group(in_),
            orig_ids,
            dropped_self_loops: dropped,
        }
    }

    /// Builds a graph from dense-id triples directly, keeping the ids as
    /// given (generator and test path). Vertex count is `max id + 1` or
    /// `min_n`, whichever is larger, so isolated trailing vertices can be
    /// forced.
    pub fn from_dense_edges(edges: &[(VertexId, VertexId, Timestamp)], min_n: usize) -> Self {
        let n = edges
            .iter()
            .map(|&(s, d, _)| s.max(d) as usize + 1)
            .max()
            .unwrap_or(0)
            .max(min_n);
        Self::from_triples_identity(edges, n)
    }

    fn from_triples_identity(edges: &[(VertexId, VertexId, Timestamp)], n: usize) -> Self {
        let mut out: Vec<Vec<(VertexId, Timestamp)>> = vec![Vec::new(); n];
        let mut in_: Vec<Vec<(VertexId, Timestamp)>> = vec![Vec::new(); n];
        let mut count = 0usize;
        let mut dropped = 0u64;
        for &(s, d, t) in edges {
            if s == d {
                dropped += 1;
                continue;
            }
            out[s as usize].push((d, t));
            in_[d as usize].push((s, t));
            count += 1;
        }
        let group = |flat: Vec<Vec<(VertexId, Timestamp)>>| -> Vec<Vec<EdgeGroup>> {
            flat.into_iter()
                .map(|mut adj| {
                    adj.sort_unstable();
                    let mut groups: Vec<EdgeGroup> = Vec::new();
                    for (nbr, t) in adj {
                        match groups.last_mut() {
                            Some(g) if g.nbr == nbr => g.ts.push(t),
                            _ => groups.push(EdgeGroup { nbr, ts: vec![t] }),
                        }
                    }
                    groups
                })
                .collect()
        };
        TemporalGraph {
            n,
            edge_count: count,
            out: group(out),
            in_: group(in_),
            orig_ids: (0..n as u64).collect(),
            dropped_self_loops: dropped,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn dropped_self_loops(&self) -> u64 {
        self.dropped_self_loops
    }

    /// Out-adjacency groups of `v`, sorted by neighbour id.
    pub fn out_groups(&self, v: VertexId) -> &[EdgeGroup] {
        &self.out[v as usize]
    }

    /// In-adjacency groups of `v` (`nbr` is the edge source), sorted by
    /// neighbour id.
    pub fn in_groups(&self, v: VertexId) -> &[EdgeGroup] {
        &self.in_[v as usize]
    }

    /// Original id of a dense vertex.
    pub fn original_id(&self, v: VertexId) -> u64 {
        self.orig_ids[v as usize]
    }

    /// All edge instances, ascending by (src, dst, ts).
    pub fn edges(&self) -> impl Iterator<Item = TemporalEdge> + '_ {
        (0..self.n as VertexId).flat_map(move |src| {
            self.out[src as usize].iter().flat_map(move |g| {
                g.ts.iter().map(move |&ts| TemporalEdge { src, dst: g.nbr, ts })
            })
        })
    }

    /// Neighbour groups of `v` filtered through an optional window view.
    /// Groups whose in-window timestamp sublist is empty are skipped.
    pub fn neighbors<'a>(
        &'a self,
        v: VertexId,
        view: Option<&'a WindowView<'a>>,
    ) -> Result<impl Iterator<Item = (VertexId, &'a [Timestamp])> + 'a, GraphError> {
        if (v as usize) >= self.n {
            return Err(GraphError::VertexOutOfRange {
                vertex: u64::from(v),
                n: self.n,
            });
        }
        Ok(self.out[v as usize].iter().filter_map(move |g| {
            let ts = match view {
                Some(w) => w.slice(&g.ts),
                None => &g.ts[..],
            };
            if ts.is_empty() || view.is_some_and(|w| !w.vertex_allowed(g.nbr)) {
                None
            } else {
                Some((g.nbr, ts))
            }
        }))
    }

    /// Serialises to edge-list text, one `src dst ts` line per edge instance,
    /// using original ids.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for e in self.edges() {
            let _ = writeln!(
                s,
                "{} {} {}",
                self.original_id(e.src),
                self.original_id(e.dst),
                e.ts
            );
        }
        s
    }

    /// The dense-id mapping as "orig dense" lines.
    pub fn id_map_lines(&self) -> String {
        let mut s = String::new();
        for (dense, orig) in self.orig_ids.iter().enumerate() {
            let _ = writeln!(s, "{orig} {dense}");
        }
        s
    }

    /// Checks the out/in mirror and sortedness invariants. Test support.
    pub fn debug_validate(&self) -> Result<(), String> {
        let mut out_edges: Vec<(VertexId, VertexId, Timestamp)> = Vec::new();
        let mut in_edges: Vec<(VertexId, VertexId, Timestamp)> = Vec::new();
        let mut out_total = 0usize;
        let mut in_total = 0usize;
        for v in 0..self.n as VertexId {
            for adj in [(&self.out[v as usize], true), (&self.in_[v as usize], false)] {
                let (groups, is_out) = adj;
                let mut prev: Option<VertexId> = None;
                for g in groups.iter() {
                    if prev.is_some_and(|p| p >= g.nbr) {
                        return Err(format!("groups of {v} not strictly sorted by neighbour"));
                    }
                    prev = Some(g.nbr);
                    if g.ts.windows(2).any(|w| w[0] > w[1]) {
                        return Err(format!("timestamps of group ({v},{}) not sorted", g.nbr));
                    }
                    if g.ts.is_empty() {
                        return Err(format!("empty group ({v},{})", g.nbr));
                    }
                    for &t in &g.ts {
                        if is_out {
                            out_edges.push((v, g.nbr, t));
                            out_total += 1;
                        } else {
                            in_edges.push((g.nbr, v, t));
                            in_total += 1;
                        }
                    }
                }
            }
        }
        if out_total != self.edge_count || in_total != self.edge_count {
            return Err(format!(
                "edge count mismatch: out {out_total}, in {in_total}, expected {}",
                self.edge_count
            ));
        }
        out_edges.sort_unstable();
        in_edges.sort_unstable();
        if out_edges != in_edges {
            return Err("out/in adjacency mirror violated".to_owned());
        }
        Ok(())
    }
}

/// Non-materialising window over a graph: edges with `lo <= ts <= hi` whose
/// endpoints pass the optional vertex mask.
pub struct WindowView<'g> {
    pub base: &'g TemporalGraph,
    pub lo: Timestamp,
    pub hi: Timestamp,
    pub mask: Option<&'g [bool]>,
}

impl<'g> WindowView<'g> {
    pub fn new(base: &'g TemporalGraph, lo: Timestamp, hi: Timestamp) -> Self {
        WindowView { base, lo, hi, mask: None }
    }

    pub fn with_mask(mut self, mask: &'g [bool]) -> Self {
        self.mask = Some(mask);
        self
    }

    /// In-window sub-slice of a sorted timestamp list.
    pub fn slice<'a>(&self, ts: &'a [Timestamp]) -> &'a [Timestamp] {
        let start = ts.partition_point(|&t| t < self.lo);
        let end = ts.partition_point(|&t| t <= self.hi);
        &ts[start..end]
    }

    pub fn vertex_allowed(&self, v: VertexId) -> bool {
        self.mask.map_or(true, |m| m[v as usize])
    }
}

/// Parses "src dst ts" edge-list text. Lines starting with '#' and blank
/// lines are skipped. With `options.untimed`, lines are "src dst" and ts = 0.
pub fn load_edge_list<R: BufRead>(
    reader: R,
    options: &LoadOptions,
) -> Result<TemporalGraph, GraphError> {
    let mut triples: Vec<(u64, u64, Timestamp)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| GraphError::Io(e.to_string()))?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tok = trimmed.split_whitespace();
        let want = if options.untimed { 2 } else { 3 };
        let mut parts: Vec<&str> = Vec::with_capacity(3);
        for _ in 0..want {
            match tok.next() {
                Some(p) => parts.push(p),
                None => {
                    return Err(GraphError::Parse {
                        line: line_no,
                        reason: format!("expected {want} fields, got {}", parts.len()),
                    })
                }
            }
        }
        if tok.next().is_some() {
            return Err(GraphError::Parse {
                line: line_no,
                reason: format!("expected {want} fields, got more"),
            });
        }
        let parse_u64 = |s: &str| -> Result<u64, GraphError> {
            s.parse::<u64>().map_err(|_| GraphError::Parse {
                line: line_no,
                reason: format!("not a non-negative integer: {s:?}"),
            })
        };
        let src = parse_u64(parts[0])?;
        let dst = parse_u64(parts[1])?;
        let ts: Timestamp = if options.untimed {
            0
        } else {
            parts[2].parse::<Timestamp>().map_err(|_| GraphError::Parse {
                line: line_no,
                reason: format!("not an integer timestamp: {:?}", parts[2]),
            })?
        };
        triples.push((src, dst, ts));
    }
    Ok(TemporalGraph::from_triples(triples))
}

/// Adversarial generator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversarialFamily {
    /// `exp-cycles(n)`: v0 -> v1, vi -> vj for 1 <= i < j <= n-1, vi -> v0.
    /// Exactly 2^(n-2) simple cycles, all through v0.
    ExpCycles { n: usize },
    /// `blocked-tail(m, k)`: hub path v0 -> v1 -> v2 with m detour pairs
    /// (w_i, u_i) between v1 and v2, closing edge v2 -> v0, and a dead-end
    /// tail b_1 -> ... -> b_k hanging off v2. Brute force re-explores the
    /// tail 2m times; Johnson visits it once.
    BlockedTail { m: usize, k: usize },
}

pub fn generate_adversarial(family: AdversarialFamily) -> Result<TemporalGraph, GraphError> {
    match family {
        AdversarialFamily::ExpCycles { n } => {
            if n < 3 {
                return Err(GraphError::BadParams("exp-cycles requires n >= 3".into()));
            }
            let mut edges: Vec<(VertexId, VertexId, Timestamp)> = Vec::new();
            edges.push((0, 1, 0));
            for i in 1..n {
                for j in (i + 1)..n {
                    edges.push((i as VertexId, j as VertexId, 0));
                }
                edges.push((i as VertexId, 0, 0));
            }
            Ok(TemporalGraph::from_dense_edges(&edges, n))
        }
        AdversarialFamily::BlockedTail { m, k } => {
            if m < 1 || k < 1 {
                return Err(GraphError::BadParams(
                    "blocked-tail requires m >= 1 and k >= 1".into(),
                ));
            }
            // 0 = v0, 1 = v1, 2 = v2, detours 3..3+2m, tail 3+2m..3+2m+k.
            let mut edges: Vec<(VertexId, VertexId, Timestamp)> = Vec::new();
            edges.push((0, 1, 0));
            for i in 0..(2 * m) {
                let d = (3 + i) as VertexId;
                edges.push((1, d, 0));
                edges.push((d, 2, 0));
            }
            edges.push((2, 0, 0));
            let tail0 = (3 + 2 * m) as VertexId;
            edges.push((2, tail0, 0));
            for i in 0..(k - 1) {
                edges.push((tail0 + i as VertexId, tail0 + i as VertexId + 1, 0));
            }
            let n = 3 + 2 * m + k;
            Ok(TemporalGraph::from_dense_edges(&edges, n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> TemporalGraph {
        load_edge_list(text.as_bytes(), &LoadOptions::default()).unwrap()
    }

    #[test]
    fn triangle_ingestion() {
        let g = load("0 1 1\n1 2 2\n2 0 3");
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        g.debug_validate().unwrap();
    }

    #[test]
    fn parallel_edges_group_into_one_bundle() {
        let g = load("0 1 5\n0 1 7");
        assert_eq!(g.out_groups(0).len(), 1);
        assert_eq!(g.out_groups(0)[0].ts, vec![5, 7]);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn self_loops_dropped_with_counter() {
        let g = load("0 0 1\n0 1 1");
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.dropped_self_loops(), 1);
    }

    #[test]
    fn duplicate_triples_are_distinct_edges() {
        let g = load("0 1 5\n0 1 5");
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.out_groups(0)[0].ts, vec![5, 5]);
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let err = load_edge_list("0 1 1\nx 2 3".as_bytes(), &LoadOptions::default()).unwrap_err();
        match err {
            GraphError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        let err = load_edge_list("0 1\n".as_bytes(), &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }));
    }

    #[test]
    fn untimed_lines_get_zero_ts() {
        let g = load_edge_list("0 1\n1 0".as_bytes(), &LoadOptions { untimed: true }).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.edges().all(|e| e.ts == 0));
    }

    #[test]
    fn neighbors_window_filter() {
        let g = load("0 1 5\n0 1 7");
        let view = WindowView::new(&g, 6, 9);
        let got: Vec<_> = g.neighbors(0, Some(&view)).unwrap().collect();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].0, 1);
        assert_eq!(got[0].1, &[7]);
        // no out-edges -> empty
        assert_eq!(g.neighbors(1, None).unwrap().count(), 0);
        assert!(g.neighbors(5, None).is_err());
    }

    #[test]
    fn round_trip_edge_list() {
        let g = load("7 3 1\n3 9 2\n9 7 3\n7 3 1");
        let text = g.to_edge_list();
        let g2 = load(&text);
        assert_eq!(g.vertex_count(), g2.vertex_count());
        assert_eq!(g.edge_count(), g2.edge_count());
        let mut a: Vec<_> = g
            .edges()
            .map(|e| (g.original_id(e.src), g.original_id(e.dst), e.ts))
            .collect();
        let mut b: Vec<_> = g2
            .edges()
            .map(|e| (g2.original_id(e.src), g2.original_id(e.dst), e.ts))
            .collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
    }

    #[test]
    fn exp_cycles_structure() {
        let g = generate_adversarial(AdversarialFamily::ExpCycles { n: 3 }).unwrap();
        let mut edges: Vec<_> = g.edges().map(|e| (e.src, e.dst)).collect();
        edges.sort_unstable();
        assert_eq!(edges, vec![(0, 1), (1, 0), (1, 2), (2, 0)]);
        assert!(generate_adversarial(AdversarialFamily::ExpCycles { n: 2 }).is_err());
    }

    #[test]
    fn blocked_tail_structure() {
        let g = generate_adversarial(AdversarialFamily::BlockedTail { m: 2, k: 3 }).unwrap();
        assert_eq!(g.vertex_count(), 3 + 4 + 3);
        g.debug_validate().unwrap();
    }
}

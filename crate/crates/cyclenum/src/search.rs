//! Shared search configuration: constraint sets, start-unit partition, and
//! per-start admissibility.
//!
//! Two partition schemes are in play. Unwindowed simple-cycle search uses the
//! classic per-vertex scheme: a search rooted at `v0` only enters vertices
//! with larger ids, so each cycle is found from its minimum vertex. Every
//! windowed, temporal, or hop-constrained search is rooted at a start edge
//! with the `[t0, t0 + delta]` window and the same-timestamp tie-break, so
//! each cycle is found from exactly one start edge.

use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::EnumError;
use crate::graph::{TemporalEdge, TemporalGraph, Timestamp, VertexId};
use crate::pruning::{cycle_union_of_edge, scc_of_edge_bounded, MaskScratch, WindowConstraint};

/// What counts as a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Simple,
    Temporal,
    /// Simple cycles with at most `L` edges.
    Hop(u32),
}

/// Per-start-edge pruning mask selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Prune {
    None,
    #[default]
    Scc,
    CycleUnion,
}

/// Full constraint set for one enumeration.
#[derive(Debug, Clone)]
pub struct Constraints {
    pub mode: Mode,
    /// `None` selects the classic per-vertex partition (simple mode only);
    /// temporal and hop searches always run edge-anchored.
    pub window: Option<WindowConstraint>,
    /// Group parallel edges into per-hop timestamp bundles.
    pub bundles: bool,
    pub prune: Prune,
    /// Strictly increasing timestamps along temporal cycles; `false` allows
    /// equal consecutive timestamps.
    pub strict_temporal: bool,
}

impl Constraints {
    pub fn simple() -> Self {
        Constraints {
            mode: Mode::Simple,
            window: None,
            bundles: true,
            prune: Prune::Scc,
            strict_temporal: true,
        }
    }

    pub fn simple_windowed(delta: Timestamp) -> Self {
        Constraints { window: Some(WindowConstraint::new(delta)), ..Self::simple() }
    }

    pub fn temporal(window: Option<WindowConstraint>) -> Self {
        Constraints {
            mode: Mode::Temporal,
            window,
            bundles: true,
            prune: Prune::CycleUnion,
            strict_temporal: true,
        }
    }

    pub fn hop(l: u32, window: Option<WindowConstraint>) -> Self {
        Constraints {
            mode: Mode::Hop(l),
            window,
            bundles: true,
            prune: Prune::Scc,
            strict_temporal: true,
        }
    }

    pub fn validate(&self) -> Result<(), EnumError> {
        if let Mode::Hop(l) = self.mode {
            if l < 2 {
                return Err(EnumError::HopTooSmall(l));
            }
        }
        if self.prune == Prune::CycleUnion && self.mode != Mode::Temporal {
            return Err(EnumError::Incompatible(
                "cycle-union pruning requires temporal mode".into(),
            ));
        }
        Ok(())
    }

    /// Edge-anchored searches apply to everything except unwindowed simple
    /// mode.
    pub fn edge_anchored(&self) -> bool {
        !(self.mode == Mode::Simple && self.window.is_none())
    }

    pub fn effective_window(&self) -> WindowConstraint {
        self.window.unwrap_or_else(WindowConstraint::unbounded)
    }

    pub fn bundle_mode(&self) -> crate::bundle::BundleMode {
        match self.mode {
            Mode::Temporal => {
                if self.strict_temporal {
                    crate::bundle::BundleMode::Temporal
                } else {
                    crate::bundle::BundleMode::TemporalNonDecreasing
                }
            }
            _ => crate::bundle::BundleMode::Simple,
        }
    }
}

/// One unit of the start partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StartUnit {
    pub v0: VertexId,
    pub first: VertexId,
    pub first_hop: FirstHop,
}

/// First-hop shape of a start unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FirstHop {
    /// Classic scheme: the whole adjacency group `v0 -> first`.
    Group,
    /// Edge-anchored scheme: exactly the `(v0, first, t0)` instances.
    At { t0: Timestamp, mult: u32 },
}

/// Enumerates the start units of a constraint set over a graph, in
/// deterministic (v0, first, t0) order.
pub fn start_units(g: &TemporalGraph, c: &Constraints) -> Vec<StartUnit> {
    let mut out = Vec::new();
    let n = g.vertex_count() as VertexId;
    for v0 in 0..n {
        for grp in g.out_groups(v0) {
            if c.edge_anchored() {
                let mut i = 0;
                while i < grp.ts.len() {
                    let t0 = grp.ts[i];
                    let mut mult = 1u32;
                    while i + (mult as usize) < grp.ts.len() && grp.ts[i + mult as usize] == t0 {
                        mult += 1;
                    }
                    out.push(StartUnit {
                        v0,
                        first: grp.nbr,
                        first_hop: FirstHop::At { t0, mult },
                    });
                    i += mult as usize;
                }
            } else if grp.nbr > v0 {
                out.push(StartUnit { v0, first: grp.nbr, first_hop: FirstHop::Group });
            }
        }
    }
    out
}

/// Resolved environment of one start: anchor bounds, first-hop timestamps,
/// and the pruning mask. Immutable and shareable across workers.
pub struct StartEnv {
    pub v0: VertexId,
    pub first: VertexId,
    /// Timestamp list of the fixed first hop.
    pub first_ts: SmallVec<[Timestamp; 4]>,
    /// Start-edge timestamp (0 in classic mode).
    pub t0: Timestamp,
    /// Window bounds; the full timestamp range in classic mode.
    pub lo: Timestamp,
    pub hi: Timestamp,
    /// Classic `id > v0` guard active?
    pub classic_guard: bool,
    pub mask: Option<Arc<[bool]>>,
    pub hop_limit: Option<u32>,
    pub strict_temporal: bool,
    pub bundles: bool,
}

impl StartEnv {
    /// Builds the environment for a start unit; `None` means the pruning
    /// mask proves no cycle can start here.
    pub fn resolve(
        g: &TemporalGraph,
        c: &Constraints,
        unit: &StartUnit,
        scratch: &mut MaskScratch,
    ) -> Option<StartEnv> {
        let (t0, first_ts): (Timestamp, SmallVec<[Timestamp; 4]>) = match unit.first_hop {
            FirstHop::Group => {
                let grp = g
                    .out_groups(unit.v0)
                    .iter()
                    .find(|grp| grp.nbr == unit.first)
                    .expect("start unit group exists");
                (0, SmallVec::from_slice(&grp.ts))
            }
            FirstHop::At { t0, mult } => {
                (t0, std::iter::repeat_n(t0, mult as usize).collect())
            }
        };
        let classic = !c.edge_anchored();
        let (lo, hi) = if classic {
            (Timestamp::MIN, Timestamp::MAX)
        } else {
            let w = c.effective_window();
            (t0, w.hi_for(t0))
        };
        let edge = TemporalEdge { src: unit.v0, dst: unit.first, ts: t0 };
        let mask: Option<Arc<[bool]>> = match c.prune {
            Prune::None => None,
            Prune::Scc => {
                let guard_v0 = unit.v0;
                let enterable = move |w: VertexId| !classic || w > guard_v0;
                match scc_of_edge_bounded(g, edge, lo, hi, enterable, scratch) {
                    Some(m) => Some(Arc::from(m)),
                    None => return None,
                }
            }
            Prune::CycleUnion => {
                match cycle_union_of_edge(g, edge, c.effective_window(), c.strict_temporal, scratch) {
                    Some(m) => Some(Arc::from(m)),
                    None => return None,
                }
            }
        };
        Some(StartEnv {
            v0: unit.v0,
            first: unit.first,
            first_ts,
            t0,
            lo,
            hi,
            classic_guard: classic,
            mask,
            hop_limit: match c.mode {
                Mode::Hop(l) => Some(l),
                _ => None,
            },
            strict_temporal: c.strict_temporal,
            bundles: c.bundles,
        })
    }

    /// May vertex `w` be entered mid-path (not counting the closing hop)?
    #[inline]
    pub fn enterable(&self, w: VertexId) -> bool {
        if self.classic_guard && w <= self.v0 {
            return false;
        }
        self.mask.as_ref().is_none_or(|m| m[w as usize])
    }

    /// Admissible sub-slice of a sorted group timestamp list when scanned
    /// from `frontier`: window bounds plus the same-timestamp tie-break.
    /// In classic mode the whole group is admissible.
    #[inline]
    pub fn admissible_ts<'a>(&self, frontier: VertexId, ts: &'a [Timestamp]) -> &'a [Timestamp] {
        if self.classic_guard {
            return ts;
        }
        let start = ts.partition_point(|&t| t < self.lo);
        let end = ts.partition_point(|&t| t <= self.hi);
        let mut s = &ts[start..end];
        if frontier >= self.v0 {
            // drop leading t == t0 instances: tie-break fails
            let skip = s.partition_point(|&t| t == self.t0);
            s = &s[skip..];
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TemporalGraph;

    #[test]
    fn classic_starts_respect_guard() {
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 0), (1, 0, 0), (1, 2, 0), (2, 1, 0)], 3);
        let units = start_units(&g, &Constraints::simple());
        let pairs: Vec<_> = units.iter().map(|u| (u.v0, u.first)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn windowed_starts_split_per_timestamp_with_multiplicity() {
        let g = TemporalGraph::from_dense_edges(&[(0, 1, 5), (0, 1, 5), (0, 1, 7)], 2);
        let units = start_units(&g, &Constraints::simple_windowed(10));
        assert_eq!(units.len(), 2);
        assert_eq!(units[0].first_hop, FirstHop::At { t0: 5, mult: 2 });
        assert_eq!(units[1].first_hop, FirstHop::At { t0: 7, mult: 1 });
    }

    #[test]
    fn admissible_slice_applies_tie_break() {
        let g = TemporalGraph::from_dense_edges(
            &[(3, 1, 5), (1, 2, 5), (1, 2, 6), (2, 3, 7)],
            4,
        );
        let c = Constraints::simple_windowed(10);
        let units = start_units(&g, &c);
        let unit = units.iter().find(|u| u.v0 == 3).unwrap();
        let mut scratch = MaskScratch::default();
        let env = StartEnv::resolve(&g, &Constraints { prune: Prune::None, ..c }, unit, &mut scratch)
            .unwrap();
        // from frontier 1 (< v0 = 3) an edge at t0 = 5 passes the tie-break
        assert_eq!(env.admissible_ts(1, &[5, 6]), &[5, 6]);
        // from a frontier with id >= v0 it does not
        assert_eq!(env.admissible_ts(3, &[5, 6]), &[6]);
    }
}

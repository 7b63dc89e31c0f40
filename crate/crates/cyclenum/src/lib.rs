//! Parallel enumeration of simple, temporal, and hop-constrained cycles in
//! directed temporal graphs.
//!
//! The crate provides three layers:
//! * sequential enumerators ([`seq`]): Tiernan (brute-force oracle), Johnson,
//!   Read-Tarjan, and the constrained Johnson variants built on closing
//!   times and barriers;
//! * coarse-grained parallel drivers ([`coarse`]): one sequential search per
//!   start edge or vertex, dynamically scheduled;
//! * fine-grained parallel enumerators ([`fg`]): Johnson and Read-Tarjan
//!   decomposed into stealable tasks with copy-on-steal state transfer.
//!
//! Graphs are immutable after construction and shared freely across
//! workers; per-worker search state is guarded by per-worker locks; sinks
//! and counters are sharded per worker and merged at the end of a run.

pub mod bundle;
pub mod coarse;
pub mod constrained;
pub mod corpus;
pub mod error;
pub mod fg;
pub mod graph;
pub mod metrics;
pub mod pruning;
pub mod runtime;
pub mod search;
pub mod seq;
pub mod sink;
pub mod state;
pub mod trace;

pub use bundle::{bundle_count, bundle_expand, BundleMode, CycleBundle, CycleRecord};
pub use error::{EnumError, GraphError};
pub use graph::{
    generate_adversarial, load_edge_list, AdversarialFamily, LoadOptions, TemporalEdge,
    TemporalGraph, Timestamp, VertexId, WindowView,
};
pub use metrics::{MetricsSnapshot, VisitCounters};
pub use pruning::{same_ts_admissible, window_of, WindowConstraint};
pub use search::{Constraints, Mode, Prune};
pub use sink::{SinkMode, SinkShard};

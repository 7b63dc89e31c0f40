//! Work counters and per-worker timing.
//!
//! Counters are sharded per worker and merged after a run completes; nothing
//! on the hot path is atomic. With the `counters` feature disabled the
//! increment helpers compile to nothing and only task/cycle totals survive.

use std::collections::BTreeMap;

use serde::Serialize;

/// Visit counters for one enumerator run (or one shard of a parallel run).
///
/// `edge_visits` counts edge instances inspected during neighbour scans and
/// DFS probes; `vertex_visits` counts path pushes and DFS vertex entries;
/// `unblock_calls` counts unblock invocations including cascade steps;
/// `dfs_calls` counts path-extension DFS vertex calls.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct VisitCounters {
    pub edge_visits: u64,
    pub vertex_visits: u64,
    pub unblock_calls: u64,
    pub dfs_calls: u64,
}

impl VisitCounters {
    #[inline]
    pub fn edge(&mut self, k: u64) {
        #[cfg(feature = "counters")]
        {
            self.edge_visits += k;
        }
        #[cfg(not(feature = "counters"))]
        let _ = k;
    }

    #[inline]
    pub fn vertex(&mut self) {
        #[cfg(feature = "counters")]
        {
            self.vertex_visits += 1;
        }
    }

    #[inline]
    pub fn unblock(&mut self) {
        #[cfg(feature = "counters")]
        {
            self.unblock_calls += 1;
        }
    }

    #[inline]
    pub fn dfs(&mut self) {
        #[cfg(feature = "counters")]
        {
            self.dfs_calls += 1;
        }
    }

    pub fn merge(&mut self, other: &VisitCounters) {
        self.edge_visits += other.edge_visits;
        self.vertex_visits += other.vertex_visits;
        self.unblock_calls += other.unblock_calls;
        self.dfs_calls += other.dfs_calls;
    }
}

/// Merged metrics of one enumeration run.
#[derive(Debug, Clone, Default, Serialize)]
pub struct MetricsSnapshot {
    pub schema: &'static str,
    pub edge_visits: u64,
    pub vertex_visits: u64,
    pub unblock_calls: u64,
    pub dfs_calls: u64,
    pub tasks_spawned: u64,
    pub tasks_stolen: u64,
    pub cycles_reported: u64,
    pub bundles_reported: u64,
    /// Busy nanoseconds per worker, indexed by worker id.
    pub busy_ns: Vec<u64>,
    pub wall_ns: u64,
}

pub const METRICS_SCHEMA: &str = "cyclenum-metrics/1";

impl MetricsSnapshot {
    pub fn new() -> Self {
        MetricsSnapshot { schema: METRICS_SCHEMA, ..Default::default() }
    }

    pub fn counters(&self) -> VisitCounters {
        VisitCounters {
            edge_visits: self.edge_visits,
            vertex_visits: self.vertex_visits,
            unblock_calls: self.unblock_calls,
            dfs_calls: self.dfs_calls,
        }
    }

    pub fn add_counters(&mut self, c: &VisitCounters) {
        self.edge_visits += c.edge_visits;
        self.vertex_visits += c.vertex_visits;
        self.unblock_calls += c.unblock_calls;
        self.dfs_calls += c.dfs_calls;
    }

    /// Commutative, associative merge. Per-worker busy times are summed
    /// index-wise; the wall clock takes the maximum.
    pub fn merge(&self, other: &MetricsSnapshot) -> MetricsSnapshot {
        let mut out = self.clone();
        out.edge_visits += other.edge_visits;
        out.vertex_visits += other.vertex_visits;
        out.unblock_calls += other.unblock_calls;
        out.dfs_calls += other.dfs_calls;
        out.tasks_spawned += other.tasks_spawned;
        out.tasks_stolen += other.tasks_stolen;
        out.cycles_reported += other.cycles_reported;
        out.bundles_reported += other.bundles_reported;
        if out.busy_ns.len() < other.busy_ns.len() {
            out.busy_ns.resize(other.busy_ns.len(), 0);
        }
        for (i, &b) in other.busy_ns.iter().enumerate() {
            out.busy_ns[i] += b;
        }
        out.wall_ns = out.wall_ns.max(other.wall_ns);
        out
    }

    /// Stable-field-order JSON.
    pub fn to_json(&self) -> String {
        let mut map = BTreeMap::new();
        map.insert("schema", serde_json::json!(self.schema));
        map.insert("edge_visits", serde_json::json!(self.edge_visits));
        map.insert("vertex_visits", serde_json::json!(self.vertex_visits));
        map.insert("unblock_calls", serde_json::json!(self.unblock_calls));
        map.insert("dfs_calls", serde_json::json!(self.dfs_calls));
        map.insert("tasks_spawned", serde_json::json!(self.tasks_spawned));
        map.insert("tasks_stolen", serde_json::json!(self.tasks_stolen));
        map.insert("cycles_reported", serde_json::json!(self.cycles_reported));
        map.insert("bundles_reported", serde_json::json!(self.bundles_reported));
        map.insert("busy_ns", serde_json::json!(self.busy_ns));
        map.insert("wall_ns", serde_json::json!(self.wall_ns));
        serde_json::to_string(&map).expect("metrics serialise")
    }

    /// CSV export: a header plus one row per worker with its busy time, then
    /// a totals row carrying the counters.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("row,worker,busy_ns,edge_visits,vertex_visits,unblock_calls,dfs_calls,tasks_spawned,tasks_stolen,cycles_reported,bundles_reported,wall_ns\n");
        for (i, b) in self.busy_ns.iter().enumerate() {
            s.push_str(&format!("worker,{i},{b},,,,,,,,,\n"));
        }
        s.push_str(&format!(
            "total,,{},{},{},{},{},{},{},{},{},{}\n",
            self.busy_ns.iter().sum::<u64>(),
            self.edge_visits,
            self.vertex_visits,
            self.unblock_calls,
            self.dfs_calls,
            self.tasks_spawned,
            self.tasks_stolen,
            self.cycles_reported,
            self.bundles_reported,
            self.wall_ns
        ));
        s
    }

    /// Coefficient of variation of per-worker busy time.
    pub fn busy_cv(&self) -> f64 {
        let n = self.busy_ns.len();
        if n == 0 {
            return 0.0;
        }
        let mean = self.busy_ns.iter().sum::<u64>() as f64 / n as f64;
        if mean == 0.0 {
            return 0.0;
        }
        let var = self
            .busy_ns
            .iter()
            .map(|&b| {
                let d = b as f64 - mean;
                d * d
            })
            .sum::<f64>()
            / n as f64;
        var.sqrt() / mean
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(seed: u64) -> MetricsSnapshot {
        let mut m = MetricsSnapshot::new();
        m.edge_visits = seed;
        m.vertex_visits = seed * 3 + 1;
        m.tasks_spawned = seed % 7;
        m.busy_ns = vec![seed, seed * 2];
        m.wall_ns = seed * 5;
        m
    }

    #[test]
    fn merge_zero_is_identity() {
        let a = sample(13);
        let merged = a.merge(&MetricsSnapshot::new());
        assert_eq!(merged.edge_visits, a.edge_visits);
        assert_eq!(merged.busy_ns, a.busy_ns);
    }

    #[test]
    fn merge_commutes() {
        for (x, y) in [(3u64, 9u64), (0, 4), (17, 17)] {
            let ab = sample(x).merge(&sample(y));
            let ba = sample(y).merge(&sample(x));
            assert_eq!(ab.to_json(), ba.to_json());
        }
    }

    #[test]
    fn csv_has_one_row_per_worker() {
        let m = sample(5);
        let csv = m.to_csv();
        assert_eq!(csv.lines().filter(|l| l.starts_with("worker,")).count(), 2);
        assert!(csv.lines().last().unwrap().starts_with("total,"));
    }
}

//! Sequential enumerators: the brute-force Tiernan baseline, Johnson with
//! delayed recursive unblocking, Read-Tarjan with path extensions, and the
//! constrained Johnson variants (closing times, barriers).

mod hop_johnson;
mod johnson;
mod read_tarjan;
mod temporal_johnson;
mod temporal_read_tarjan;
mod tiernan;

pub use hop_johnson::{barrier_unblock, hop_johnson_enumerate};
pub use johnson::johnson_enumerate;
pub use read_tarjan::{read_tarjan_enumerate, RtOpts};
pub use temporal_johnson::{closing_time_unblock, temporal_johnson_enumerate};
pub use temporal_read_tarjan::temporal_read_tarjan_enumerate;
pub use tiernan::{oracle_set, tiernan_enumerate};

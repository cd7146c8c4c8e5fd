use serde::{Deserialize, Serialize};

use vanishing::BmStats;

/// Counters of one run, as written to result and stats files.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub element_cmps: u64,
    pub delta_cmps: u64,
    pub field_ops: u64,
    pub functional_calls: u64,
    pub l_max: usize,
    pub n_bar: usize,
    pub relations: usize,
    pub rank: usize,
    /// Seconds.
    pub wall_time: f64,
}

impl RunStats {
    pub fn from_bm(s: &BmStats, wall_time: f64) -> Self {
        RunStats {
            element_cmps: s.element_cmps,
            delta_cmps: s.delta_cmps,
            field_ops: s.field_ops,
            functional_calls: s.functional_calls,
            l_max: s.l_max,
            n_bar: s.n_bar,
            relations: s.relations,
            rank: s.rank,
            wall_time,
        }
    }
}

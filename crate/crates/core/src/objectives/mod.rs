//! Qualitative objectives on top of the MEC decomposition: almost-sure
//! reachability and parity.

mod parity;
mod priority;
mod reach;

pub use parity::{asw_parity, win_pec, ParityStats};
pub use priority::{min_priority, PriorityMap};
pub use reach::sym_as_reach;

use serde::Serialize;

use crate::symbolic::{VertexId, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "objective", rename_all = "snake_case")]
pub enum Objective {
    Reach { targets: Vec<VertexId> },
    Parity { d: u32 },
}

/// Vertices from which player 1 wins almost surely, over original ids.
#[derive(Debug)]
pub struct WinningRegion {
    pub asw: VertexSet,
    pub objective: Objective,
}

impl WinningRegion {
    pub fn ids(&self) -> Vec<VertexId> {
        self.asw.members()
    }
}

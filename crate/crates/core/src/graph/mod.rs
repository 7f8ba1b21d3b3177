//! Symbolic graph primitives: SCC streaming, reachability, random
//! attractors and BFS-layer separators.

mod attractor;
mod reach;
mod scc;
mod separator;

pub use attractor::{random_attractor, random_attractor_in, random_attractor_levels, AttractorResult};
pub use reach::graph_reach;
pub use scc::{scc_containing, scc_decompose, scc_find, SccStream};
pub use separator::{separator, separator_quality};

use crate::error::Result;
use crate::symbolic::{SymbolicMdp, VertexSet};

/// Backward closure of `s`: all vertices with a path into `s`. Each
/// iteration applies `Pre` to the newest layer only, so at most
/// `|result ∖ s| + 1` predecessor operations are used.
pub fn graph_reach(p: &SymbolicMdp, s: &VertexSet) -> Result<VertexSet> {
    let mut reached = s.intersect(p.vertices())?;
    let mut frontier = reached.copy();
    loop {
        let mut next = p.pre(&frontier)?;
        next.difference_with(&reached)?;
        if next.is_empty() {
            return Ok(reached);
        }
        reached.union_with(&next)?;
        frontier = next;
    }
}

use super::collapse::rout;
use super::decomposition::{MecDecomposition, MecStats};
use crate::error::Result;
use crate::graph::{random_attractor_in, SccStream};
use crate::symbolic::{SymbolicMdp, VertexSet};

/// The classical decomposition: split into SCCs, remove from each SCC the
/// random attractor of its leaking random vertices, repeat until every SCC
/// is closed. Uses `O(n)` SCC decompositions in the worst case.
pub fn classical_mec(p: &SymbolicMdp) -> Result<(MecDecomposition, MecStats)> {
    let mut mecs = Vec::new();
    let stats = classical_mec_stream(p, |m| {
        mecs.push(m.members());
        Ok(())
    })?;
    Ok((MecDecomposition::from_mecs(p.universe().size(), mecs), stats))
}

pub fn classical_mec_stream(p: &SymbolicMdp, mut emit: impl FnMut(VertexSet) -> Result<()>) -> Result<MecStats> {
    let mut run = Classical {
        stats: MecStats::default(),
        depth: 0,
    };
    let mut sccs = SccStream::new(p, p.vertices(), None)?;
    while let Some(c) = sccs.next_scc(p)? {
        run.component(p, c, &mut emit)?;
    }
    Ok(run.stats)
}

struct Classical {
    stats: MecStats,
    depth: usize,
}

impl Classical {
    // the largest remaining SCC is handled by looping, so recursion only
    // happens on SCCs of at most half the size
    fn component(
        &mut self,
        p: &SymbolicMdp,
        mut c: VertexSet,
        emit: &mut impl FnMut(VertexSet) -> Result<()>,
    ) -> Result<()> {
        self.depth += 1;
        self.stats.max_depth = self.stats.max_depth.max(self.depth);
        loop {
            let size = c.cardinality();
            if size <= 1 {
                break;
            }
            let leaking = rout(p, &c)?;
            if leaking.is_empty() {
                self.stats.mec_count += 1;
                emit(c)?;
                break;
            }
            let z = random_attractor_in(p, &c, &leaking)?;
            drop(leaking);
            let rest = c.difference(&z)?;
            drop(z);
            let mut sccs = SccStream::new(p, &rest, None)?;
            drop(rest);
            let mut deferred = None;
            while let Some(d) = sccs.next_scc(p)? {
                let k = d.cardinality();
                if deferred.is_none() && 2 * k >= size && k > 1 {
                    deferred = Some(d);
                    continue;
                }
                self.component(p, d, emit)?;
            }
            match deferred {
                Some(d) => c = d,
                None => break,
            }
        }
        self.depth -= 1;
        Ok(())
    }
}

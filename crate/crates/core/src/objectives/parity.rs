use serde::Serialize;

use super::priority::{min_priority, PriorityMap};
use super::reach::sym_as_reach;
use super::{Objective, WinningRegion};
use crate::error::{Error, Result};
use crate::graph::random_attractor_in;
use crate::mec::{collapse_ec, mec_stream, CollapseMap, MecAlgorithm};
use crate::symbolic::{SymbolicMdp, VertexSet};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ParityStats {
    /// Deepest nesting of recursive calls, the top call counting as one.
    pub max_depth: usize,
    pub min_priority_calls: usize,
}

struct WinPec<'a> {
    pm: &'a PriorityMap,
    algo: MecAlgorithm,
    depth: usize,
    stats: ParityStats,
}

/// Vertices of winning MECs for the priorities `i..=j`, over original ids.
/// `p` is consumed as a working copy: MECs get collapsed in it.
pub fn win_pec(
    pm: &PriorityMap,
    i: u32,
    j: u32,
    p: &mut SymbolicMdp,
    algo: MecAlgorithm,
) -> Result<(VertexSet, ParityStats)> {
    let mut run = WinPec {
        pm,
        algo,
        depth: 0,
        stats: ParityStats::default(),
    };
    let mut map = CollapseMap::new(p.universe().size());
    let w = run.call(i, j, p, &mut map)?;
    Ok((w, run.stats))
}

/// Almost-sure parity: almost-sure reachability of the winning MECs.
pub fn asw_parity(pm: &PriorityMap, p: &SymbolicMdp, algo: MecAlgorithm) -> Result<(WinningRegion, ParityStats)> {
    let mut work = p.duplicate();
    let (we, stats) = win_pec(pm, 0, 2 * pm.d(), &mut work, algo)?;
    drop(work);
    let mut region = sym_as_reach(p, &we, algo)?;
    region.objective = Objective::Parity { d: pm.d() };
    Ok((region, stats))
}

impl WinPec<'_> {
    fn call(&mut self, i: u32, j: u32, p: &mut SymbolicMdp, map: &mut CollapseMap) -> Result<VertexSet> {
        self.depth += 1;
        self.stats.max_depth = self.stats.max_depth.max(self.depth);
        let result = self.frame(i, j, p, map);
        self.depth -= 1;
        result
    }

    fn frame(&mut self, i: u32, j: u32, p: &mut SymbolicMdp, map: &mut CollapseMap) -> Result<VertexSet> {
        let u = p.universe().clone();
        let mut w = u.empty();
        if j < i {
            return Ok(w);
        }
        let m = (i + j).div_ceil(2);
        let sub = {
            let low = match m {
                0 => u.empty(),
                m => self.pm.at_most_in(m - 1, p.vertices())?,
            };
            let x = random_attractor_in(p, p.vertices(), &low)?;
            drop(low);
            let z = p.vertices().difference(&x)?;
            drop(x);
            p.restrict(&z)?
        };

        mec_stream(&sub, self.algo, |mec| {
            self.stats.min_priority_calls += 1;
            let min = min_priority(&mec, self.pm)?;
            if min % 2 == 0 {
                w.union_with(&map.expand(&mec)?)?;
                return Ok(());
            }
            let lowest = self.pm.exactly_in(min, &mec)?;
            let a = random_attractor_in(&sub, &mec, &lowest)?;
            drop(lowest);
            let rest = mec.difference(&a)?;
            drop(a);
            if rest.cardinality() >= mec.cardinality() {
                return Err(Error::Invariant(format!(
                    "odd minimum {min} removed no vertex from a MEC"
                )));
            }
            let mut inner = sub.restrict(&rest)?;
            drop(rest);
            let mut inner_map = map.clone();
            let won = self.call(min + 1, j, &mut inner, &mut inner_map)?;
            w.union_with(&won)?;
            Ok(())
        })?;

        mec_stream(&sub, self.algo, |mec| {
            collapse_ec(p, &mec, map)?;
            Ok(())
        })?;
        drop(sub);
        if m > 0 {
            let won = self.call(i, m - 1, p, map)?;
            w.union_with(&won)?;
        }
        Ok(w)
    }
}

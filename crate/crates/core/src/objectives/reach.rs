use super::{Objective, WinningRegion};
use crate::error::Result;
use crate::graph::{graph_reach, random_attractor};
use crate::mec::{collapse_ec, mec_stream, CollapseMap, MecAlgorithm};
use crate::symbolic::{SymbolicMdp, VertexSet};

/// Almost-sure reachability of `t`.
///
/// Every MEC is collapsed in a working copy (a MEC touching `t` puts its
/// representative into the target), then the copy is solved by graph
/// reachability and one random attractor, and the MECs whose representative
/// wins are added back. The MECs are streamed twice, never stored.
pub fn sym_as_reach(p: &SymbolicMdp, t: &VertexSet, algo: MecAlgorithm) -> Result<WinningRegion> {
    let u = p.universe();
    let targets = t.members();
    let mut work = p.duplicate();
    let mut map = CollapseMap::new(u.size());
    let mut target = t.intersect(p.vertices())?;
    mec_stream(p, algo, |mec| {
        let touches = !mec.is_disjoint(&target)?;
        let rep = collapse_ec(&mut work, &mec, &mut map)?;
        if touches {
            target.union_with(&u.singleton(rep)?)?;
        }
        Ok(())
    })?;
    drop(map);

    target.intersect_with(work.vertices())?;
    let s = graph_reach(&work, &target)?;
    // a target vertex is won on arrival: cut its out-edges so the attractor
    // cannot pull it in
    let live = work.vertices().copy();
    let exits = target.product(&live)?;
    drop(live);
    work.parts_mut().3.difference_with(&exits)?;
    drop(exits);
    drop(target);
    let lost = work.vertices().difference(&s)?;
    drop(s);
    let a = random_attractor(&work, &lost)?;
    drop(lost);
    let mut r = work.vertices().difference(&a)?;
    drop(a);
    drop(work);

    mec_stream(p, algo, |mec| {
        if !mec.is_disjoint(&r)? {
            r.union_with(&mec)?;
        }
        Ok(())
    })?;
    Ok(WinningRegion {
        asw: r,
        objective: Objective::Reach { targets },
    })
}

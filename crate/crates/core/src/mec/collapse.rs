use crate::error::{Error, Result};
use crate::graph::scc_containing;
use crate::symbolic::{OpKind, SymbolicMdp, VertexId, VertexSet};

/// `ROut(S) = Pre(V ∖ S) ∩ S ∩ VR`: random vertices of `S` with an edge
/// leaving `S`, with respect to the current edges of `P`.
pub fn rout(p: &SymbolicMdp, s: &VertexSet) -> Result<VertexSet> {
    let outside = p.vertices().difference(s)?;
    let mut r = p.pre_in(&outside, s)?;
    r.intersect_with(p.random())?;
    Ok(r)
}

/// Which representative every collapsed vertex was merged into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseMap {
    parent: Vec<u32>,
}

impl CollapseMap {
    pub fn new(n: usize) -> Self {
        CollapseMap {
            parent: (0..n as u32).collect(),
        }
    }

    /// Current representative of `v` (itself if never collapsed).
    pub fn find(&self, v: VertexId) -> VertexId {
        let mut x = v.0;
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        VertexId(x)
    }

    pub fn is_collapsed(&self, v: VertexId) -> bool {
        self.parent[v.index()] != v.0
    }

    fn record(&mut self, rep: VertexId, merged: &[VertexId]) {
        for &u in merged {
            self.parent[u.index()] = rep.0;
        }
    }

    /// All original vertices whose representative is `rep`.
    pub fn members_of(&self, rep: VertexId) -> Vec<VertexId> {
        (0..self.parent.len() as u32)
            .map(VertexId)
            .filter(|&u| self.find(u) == rep)
            .collect()
    }

    /// `S ∪ { u | find(u) ∈ S }`, one basic set operation.
    pub fn expand(&self, s: &VertexSet) -> Result<VertexSet> {
        let u = s.universe();
        if u.size() != self.parent.len() {
            return Err(Error::UniverseMismatch {
                left: u.size(),
                right: self.parent.len(),
            });
        }
        u.op(OpKind::BasicSet);
        u.from_ids(
            (0..self.parent.len() as u32)
                .map(VertexId)
                .filter(|&v| s.contains_unmetered(self.find(v))),
        )
    }
}

/// Collapses the end-component `X` into one vertex `v ∈ X`, preferring a
/// player-1 vertex; a random representative becomes player-1. Edges into
/// and out of `X` are redirected to `v` and the rest of `X` leaves the live
/// vertex set. Returns `v`.
///
/// In verification mode the end-component precondition is checked first,
/// at the cost of extra metered operations.
pub fn collapse_ec(p: &mut SymbolicMdp, x: &VertexSet, map: &mut CollapseMap) -> Result<VertexId> {
    let u = p.universe().clone();
    if u.verification() {
        check_end_component(p, x)?;
    }
    let p1x = x.intersect(p.player1())?;
    let promote = p1x.is_empty();
    let v = if promote { x.pick()? } else { p1x.pick()? };
    drop(p1x);
    let vs = u.singleton(v)?;
    let rest = x.difference(&vs)?;

    let mut into = p.pre(x)?;
    into.difference_with(x)?;
    let mut out = p.post(x)?;
    out.difference_with(x)?;
    let add_in = into.product(&vs)?;
    let add_out = vs.product(&out)?;
    drop((into, out));
    let live = p.vertices().copy();
    let cut_in = live.product(&rest)?;
    let cut_out = rest.product(&live)?;
    drop(live);

    let (vertices, player1, random, edges) = p.parts_mut();
    edges.union_with(&add_in)?;
    edges.union_with(&add_out)?;
    edges.difference_with(&cut_in)?;
    edges.difference_with(&cut_out)?;
    if promote {
        player1.union_with(&vs)?;
        random.difference_with(&vs)?;
    }
    vertices.difference_with(&rest)?;
    player1.intersect_with(vertices)?;
    random.intersect_with(vertices)?;

    map.record(v, &rest.members());
    Ok(v)
}

fn check_end_component(p: &SymbolicMdp, x: &VertexSet) -> Result<()> {
    if x.cardinality() < 2 {
        return Err(Error::contract("collapse of a set with fewer than two vertices"));
    }
    if !x.is_subset(p.vertices())? {
        return Err(Error::contract("collapse of a set with dead vertices"));
    }
    if !rout(p, x)?.is_empty() {
        return Err(Error::contract("collapse of a set with leaving random edges"));
    }
    let scc = scc_containing(p, x, x.pick()?)?;
    if !scc.equals(x)? {
        return Err(Error::contract("collapse of a set that is not strongly connected"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explicit::ExplicitMdp;
    use crate::symbolic::Backend;

    fn set(p: &SymbolicMdp, ids: &[u32]) -> VertexSet {
        p.universe().from_ids(ids.iter().map(|&v| VertexId(v))).unwrap()
    }

    #[test]
    fn two_cycle_with_player1_representative() {
        // a=0 ∈ V1, b=1 ∈ VR, c=2, d=3; a ↔ b, c → b, b → d, d → c
        let g = ExplicitMdp::from_edges(
            4,
            vec![false, true, false, false],
            [(0, 1), (1, 0), (2, 1), (1, 3), (3, 2)],
        );
        let mut p = SymbolicMdp::from_explicit(&g, Backend::BitVector).unwrap();
        let mut map = CollapseMap::new(4);
        let x = set(&p, &[0, 1]);
        // not an EC: b leaks to d
        assert_eq!(rout(&p, &x).unwrap().members(), vec![VertexId(1)]);
        let v = collapse_ec(&mut p, &x, &mut map).unwrap();
        assert_eq!(v, VertexId(0));
        assert_eq!(p.vertices().members(), vec![VertexId(0), VertexId(2), VertexId(3)]);
        let edges: Vec<(u32, u32)> = p
            .edges()
            .edges_unmetered()
            .into_iter()
            .map(|(a, b)| (a.0, b.0))
            .collect();
        assert_eq!(edges, vec![(0, 3), (2, 0), (3, 2)]);
        assert_eq!(map.find(VertexId(1)), VertexId(0));
        assert_eq!(map.members_of(VertexId(0)), vec![VertexId(0), VertexId(1)]);
        p.validate(true).unwrap();
    }

    #[test]
    fn random_representative_is_promoted() {
        let g = ExplicitMdp::from_edges(3, vec![true, true, false], [(0, 1), (1, 0), (2, 0), (0, 2)]);
        let mut p = SymbolicMdp::from_explicit(&g, Backend::BitVector).unwrap();
        let mut map = CollapseMap::new(3);
        let x = set(&p, &[0, 1, 2]);
        p.universe().set_verification(true);
        let v = collapse_ec(&mut p, &x, &mut map).unwrap();
        assert_eq!(v, VertexId(2));
        let y = set(&p, &[2]);
        assert!(collapse_ec(&mut p, &y, &mut map).is_err());

        let mut q = SymbolicMdp::from_explicit(&g, Backend::BitVector).unwrap();
        let x = set(&q, &[0, 1]);
        let mut map = CollapseMap::new(3);
        q.universe().set_verification(true);
        assert!(collapse_ec(&mut q, &x, &mut map).is_err(), "0 leaks to 2");
        q.universe().set_verification(false);
        let v = collapse_ec(&mut q, &x, &mut map).unwrap();
        assert_eq!(v, VertexId(0));
        assert!(q.player1().contains_unmetered(v));
        assert!(!q.random().contains_unmetered(v));
        let expanded = map.expand(&set(&q, &[0])).unwrap();
        assert_eq!(expanded.members(), vec![VertexId(0), VertexId(1)]);
    }
}

use crate::error::Result;
use crate::symbolic::{SymbolicMdp, VertexSet};

/// A random attractor together with its levels `A_0 = T ⊆ A_1 ⊆ …`.
#[derive(Debug)]
pub struct AttractorResult {
    pub attractor: VertexSet,
    pub levels: Vec<VertexSet>,
}

/// `Attr_R(P, T)` over the whole MDP.
pub fn random_attractor(p: &SymbolicMdp, t: &VertexSet) -> Result<VertexSet> {
    random_attractor_in(p, p.vertices(), t)
}

/// `Attr_R(P[S], T)`: the attractor in the sub-MDP induced by `within`.
/// Edges leaving `within` are ignored, so a player-1 vertex is attracted as
/// soon as all of its edges inside `within` lead into the attractor.
pub fn random_attractor_in(p: &SymbolicMdp, within: &VertexSet, t: &VertexSet) -> Result<VertexSet> {
    run(p, within, t, None)
}

pub fn random_attractor_levels(p: &SymbolicMdp, within: &VertexSet, t: &VertexSet) -> Result<AttractorResult> {
    let mut levels = Vec::new();
    let attractor = run(p, within, t, Some(&mut levels))?;
    Ok(AttractorResult { attractor, levels })
}

// Only vertices with an edge into the newest level can join next: a random
// vertex joins on its first edge into the attractor and a player-1 vertex on
// its last one.
fn run(
    p: &SymbolicMdp,
    within: &VertexSet,
    t: &VertexSet,
    mut levels: Option<&mut Vec<VertexSet>>,
) -> Result<VertexSet> {
    let mut attr = t.intersect(within)?;
    if let Some(l) = levels.as_deref_mut() {
        l.push(attr.copy());
    }
    let mut delta = attr.copy();
    loop {
        let mut cand = p.pre_in(&delta, within)?;
        cand.difference_with(&attr)?;
        if cand.is_empty() {
            break;
        }
        let rest = within.difference(&attr)?;
        let blocked = p.pre_in(&rest, p.player1())?;
        drop(rest);
        cand.difference_with(&blocked)?;
        drop(blocked);
        if cand.is_empty() {
            break;
        }
        attr.union_with(&cand)?;
        if let Some(l) = levels.as_deref_mut() {
            l.push(attr.copy());
        }
        delta = cand;
    }
    Ok(attr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explicit::{explicit_attractor, ExplicitMdp};
    use crate::symbolic::{Backend, VertexId};

    #[test]
    fn hand_run_levels() {
        // a=0 ∈ V1, b=1 ∈ VR, c=2 ∈ V1
        let g = ExplicitMdp::from_edges(3, vec![false, true, false], [(0, 1), (1, 2), (1, 0), (2, 0)]);
        let p = SymbolicMdp::from_explicit(&g, Backend::BitVector).unwrap();
        let t = p.universe().singleton(VertexId(2)).unwrap();
        let r = random_attractor_levels(&p, p.vertices(), &t).unwrap();
        let levels: Vec<Vec<u32>> = r
            .levels
            .iter()
            .map(|l| l.members().into_iter().map(|v| v.0).collect())
            .collect();
        assert_eq!(levels, vec![vec![2], vec![1, 2], vec![0, 1, 2]]);
        assert_eq!(r.attractor.len_unmetered(), 3);

        let whole = random_attractor(&p, p.vertices()).unwrap();
        assert_eq!(whole.len_unmetered(), 3);
        assert_eq!(explicit_attractor(&g, &[true; 3], &[false, false, true]), vec![true; 3]);
    }

    #[test]
    fn restriction_drops_outside_edges() {
        // player-1 vertex 0 with edges to 1 (target) and 2; inside {0,1} only
        // the edge to 1 remains, so 0 is attracted there but not globally.
        let g = ExplicitMdp::from_edges(3, vec![false; 3], [(0, 1), (0, 2), (1, 0), (2, 0)]);
        let p = SymbolicMdp::from_explicit(&g, Backend::BitVector).unwrap();
        let u = p.universe();
        let t = u.singleton(VertexId(1)).unwrap();
        assert_eq!(random_attractor(&p, &t).unwrap().len_unmetered(), 1);
        let within = u.from_ids([VertexId(0), VertexId(1)]).unwrap();
        assert_eq!(random_attractor_in(&p, &within, &t).unwrap().len_unmetered(), 2);
    }
}

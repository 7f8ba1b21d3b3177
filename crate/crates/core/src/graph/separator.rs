use crate::error::{Error, Result};
use crate::symbolic::{SymbolicMdp, VertexId, VertexSet};

/// Separator quality `q = ⌊γ / (2·log2 k)⌋` for a set of `k` vertices.
/// Zero when `k ≤ 1` or `γ` is too small for a meaningful separator.
pub fn separator_quality(gamma: usize, k: usize) -> usize {
    if k <= 1 {
        return 0;
    }
    (gamma as f64 / (2.0 * (k as f64).log2())).floor() as usize
}

/// BFS-layer separator of a strongly connected set `X`.
///
/// Grows a BFS tree from the root (`pick(X)` unless given) forward, and if
/// that tree has fewer than `γ` levels, backward. If both are shallower than
/// `γ` the result is empty. Otherwise one layer of the deep tree is returned:
/// the first light layer in the first half or the last light layer in the
/// second half, depending on how many vertices the first half holds.
pub fn separator(p: &SymbolicMdp, x: &VertexSet, gamma: usize, root: Option<VertexId>) -> Result<VertexSet> {
    let u = p.universe();
    let k = x.cardinality();
    if k == 0 {
        return Err(Error::contract("separator of an empty set"));
    }
    let q = separator_quality(gamma, k);
    if q == 0 {
        return Ok(u.empty());
    }
    let r = match root {
        Some(r) if !x.contains_unmetered(r) => {
            return Err(Error::contract(format!("separator root {r} is not in X")));
        }
        Some(r) => r,
        None => x.pick()?,
    };

    let mut tree = grow(p, x, r, gamma, q, true)?;
    if tree.depth < gamma {
        tree = grow(p, x, r, gamma, q, false)?;
    }
    if tree.depth < gamma {
        return Ok(u.empty());
    }
    let chosen = if 2 * tree.first_half < k { tree.left } else { tree.right };
    Ok(chosen.unwrap_or_else(|| u.empty()))
}

struct Tree {
    depth: usize,
    first_half: usize,
    left: Option<VertexSet>,
    right: Option<VertexSet>,
}

fn grow(p: &SymbolicMdp, x: &VertexSet, r: VertexId, gamma: usize, q: usize, forward: bool) -> Result<Tree> {
    let u = p.universe();
    let mut seen = u.singleton(r)?;
    let mut frontier = u.singleton(r)?;
    let mut tree = Tree {
        depth: 0,
        first_half: 0,
        left: None,
        right: None,
    };
    let (gf, qf) = (gamma as f64, q as f64);
    let mut i = 0usize;
    // the backward tree stops once it is known to be deep enough
    while forward || i <= gamma {
        let mut z = if forward {
            p.post_in(&frontier, x)?
        } else {
            p.pre_in(&frontier, x)?
        };
        z.difference_with(&seen)?;
        if z.is_empty() {
            break;
        }
        let size = z.cardinality() as f64;
        let fi = i as f64;
        if q <= i && 2 * i <= gamma && tree.left.is_none() && size <= (fi / qf - 1.0).exp2() {
            tree.left = Some(z.copy());
        }
        if 2 * i >= gamma && i + q <= gamma && size <= ((gf - fi) / qf - 1.0).exp2() {
            tree.right = Some(z.copy());
        }
        if 2 * i <= gamma {
            tree.first_half += size as usize;
        }
        seen.union_with(&z)?;
        frontier = z;
        i += 1;
    }
    tree.depth = i;
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explicit::{tarjan_scc_within, ExplicitMdp};
    use crate::symbolic::Backend;

    #[test]
    fn quality_uses_log2_of_set_size() {
        assert_eq!(separator_quality(16, 64), 1);
        assert_eq!(separator_quality(6, 8), 1);
        assert_eq!(separator_quality(5, 8), 0);
        assert_eq!(separator_quality(100, 1), 0);
    }

    #[test]
    fn clique_has_small_diameter() {
        let n = 8;
        let edges = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)));
        let g = ExplicitMdp::from_edges(n, vec![false; n], edges);
        let p = SymbolicMdp::from_explicit(&g, Backend::BitVector).unwrap();
        assert!(separator(&p, p.vertices(), 6, None).unwrap().members().is_empty());
    }

    #[test]
    fn long_cycle_is_separated() {
        let n = 64;
        let g = ExplicitMdp::from_edges(n, vec![false; n], (0..n).map(|i| (i, (i + 1) % n)));
        let p = SymbolicMdp::from_explicit(&g, Backend::BitVector).unwrap();
        let t = separator(&p, p.vertices(), 16, None).unwrap();
        let t: Vec<usize> = t.members().into_iter().map(VertexId::index).collect();
        assert!(!t.is_empty());
        let mask: Vec<bool> = (0..n).map(|v| !t.contains(&v)).collect();
        for c in tarjan_scc_within(&g, &mask) {
            assert!(c.len() <= n - t.len());
        }
    }

    #[test]
    fn empty_set_is_a_contract_error() {
        let g = ExplicitMdp::from_edges(2, vec![false; 2], [(0, 1), (1, 0)]);
        let p = SymbolicMdp::from_explicit(&g, Backend::BitVector).unwrap();
        assert!(separator(&p, &p.universe().empty(), 4, None).is_err());
    }
}

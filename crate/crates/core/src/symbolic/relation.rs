use std::fmt;

use super::meter::OpKind;
use super::set::{merge_union_sorted, SetRepr, Universe, VertexId, VertexSet};
use crate::error::Result;

#[derive(Debug, Clone, Default)]
pub(crate) struct Adjacency {
    fwd: Vec<Vec<u32>>,
    bwd: Vec<Vec<u32>>,
}

impl Adjacency {
    fn new(n: usize) -> Self {
        Adjacency {
            fwd: vec![Vec::new(); n],
            bwd: vec![Vec::new(); n],
        }
    }

    fn from_fwd(fwd: Vec<Vec<u32>>) -> Self {
        let mut bwd = vec![Vec::new(); fwd.len()];
        for (u, outs) in fwd.iter().enumerate() {
            for &v in outs {
                bwd[v as usize].push(u as u32);
            }
        }
        // rows of `bwd` come out sorted because `u` is increasing
        Adjacency { fwd, bwd }
    }

    fn edge_count(&self) -> usize {
        self.fwd.iter().map(Vec::len).sum()
    }

    fn insert(&mut self, a: u32, b: u32) {
        let row = &mut self.fwd[a as usize];
        if let Err(pos) = row.binary_search(&b) {
            row.insert(pos, b);
            let col = &mut self.bwd[b as usize];
            let pos = col.binary_search(&a).unwrap_err();
            col.insert(pos, a);
        }
    }

    fn remove_from(list: &mut Vec<u32>, x: u32) {
        if let Ok(pos) = list.binary_search(&x) {
            list.remove(pos);
        }
    }

    fn union_product(&mut self, rows: &SetRepr, cols: &SetRepr) {
        let cols: Vec<u32> = cols.iter().collect();
        for a in rows.iter() {
            for &b in &cols {
                self.insert(a, b);
            }
        }
    }

    fn difference_product(&mut self, rows: &SetRepr, cols: &SetRepr) {
        if rows.len() <= cols.len() {
            for a in rows.iter() {
                let mut removed = Vec::new();
                self.fwd[a as usize].retain(|&b| {
                    let hit = cols.contains(b);
                    if hit {
                        removed.push(b);
                    }
                    !hit
                });
                for b in removed {
                    Self::remove_from(&mut self.bwd[b as usize], a);
                }
            }
        } else {
            for b in cols.iter() {
                let mut removed = Vec::new();
                self.bwd[b as usize].retain(|&a| {
                    let hit = rows.contains(a);
                    if hit {
                        removed.push(a);
                    }
                    !hit
                });
                for a in removed {
                    Self::remove_from(&mut self.fwd[a as usize], b);
                }
            }
        }
    }

    fn intersect_product(&mut self, rows: &SetRepr, cols: &SetRepr) {
        let n = self.fwd.len();
        let mut fwd = vec![Vec::new(); n];
        for a in rows.iter() {
            fwd[a as usize] = self.fwd[a as usize]
                .iter()
                .copied()
                .filter(|&b| cols.contains(b))
                .collect();
        }
        *self = Adjacency::from_fwd(fwd);
    }

    fn zip_rows(&mut self, other: &Adjacency, f: impl Fn(&[u32], &[u32]) -> Vec<u32>) {
        let fwd = self.fwd.iter().zip(&other.fwd).map(|(a, b)| f(a, b)).collect();
        *self = Adjacency::from_fwd(fwd);
    }
}

#[derive(Debug, Clone)]
pub(crate) enum RelRepr {
    Adjacency(Adjacency),
    /// Lazy cartesian product `rows × cols`.
    Product {
        rows: SetRepr,
        cols: SetRepr,
    },
}

impl RelRepr {
    fn materialize(&self, n: usize) -> Adjacency {
        match self {
            RelRepr::Adjacency(a) => a.clone(),
            RelRepr::Product { rows, cols } => {
                let cols: Vec<u32> = cols.iter().collect();
                let mut fwd = vec![Vec::new(); n];
                for a in rows.iter() {
                    fwd[a as usize] = cols.clone();
                }
                Adjacency::from_fwd(fwd)
            }
        }
    }
}

#[derive(Clone, Copy)]
enum RelOp {
    Union,
    Intersect,
    Difference,
}

/// Opaque handle to a set of edges `E ⊆ V × V`. Like a vertex set it is one
/// unit of symbolic space while alive.
pub struct EdgeRelation {
    universe: Universe,
    repr: RelRepr,
}

impl Drop for EdgeRelation {
    fn drop(&mut self) {
        self.universe.meter().free();
    }
}

impl fmt::Debug for EdgeRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.edges_unmetered().iter().map(|(a, b)| (a.0, b.0)))
            .finish()
    }
}

impl EdgeRelation {
    fn wrap(universe: &Universe, repr: RelRepr) -> Self {
        universe.meter().alloc();
        EdgeRelation {
            universe: universe.clone(),
            repr,
        }
    }

    pub(crate) fn product_of(universe: &Universe, rows: SetRepr, cols: SetRepr) -> Self {
        Self::wrap(universe, RelRepr::Product { rows, cols })
    }

    pub fn empty(universe: &Universe) -> Self {
        Self::wrap(universe, RelRepr::Adjacency(Adjacency::new(universe.size())))
    }

    /// Builds a relation from explicit edges (input construction, unmetered).
    /// Duplicate edges are merged.
    pub fn from_edges<I>(universe: &Universe, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut fwd = vec![Vec::new(); universe.size()];
        for (a, b) in edges {
            universe.check_id(a)?;
            universe.check_id(b)?;
            fwd[a.index()].push(b.0);
        }
        for row in &mut fwd {
            row.sort_unstable();
            row.dedup();
        }
        Ok(Self::wrap(universe, RelRepr::Adjacency(Adjacency::from_fwd(fwd))))
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// A new live relation with the same edges. Assignment, not an operation.
    pub fn copy(&self) -> EdgeRelation {
        Self::wrap(&self.universe, self.repr.clone())
    }

    /// `Pre_E(S) = { v | ∃w ∈ S: (v, w) ∈ E }`.
    pub fn pre(&self, s: &VertexSet) -> Result<VertexSet> {
        self.universe.check(s.universe())?;
        self.universe.op(OpKind::Pre);
        Ok(self.universe.wrap(self.image(&s.repr, true)))
    }

    /// `Post_E(S) = { v | ∃w ∈ S: (w, v) ∈ E }`.
    pub fn post(&self, s: &VertexSet) -> Result<VertexSet> {
        self.universe.check(s.universe())?;
        self.universe.op(OpKind::Post);
        Ok(self.universe.wrap(self.image(&s.repr, false)))
    }

    /// `Pre_E(S) ∩ M`, metered as the image followed by one intersection.
    /// Scans whichever of `S` and `M` is smaller.
    pub(crate) fn pre_in(&self, s: &VertexSet, mask: &VertexSet) -> Result<VertexSet> {
        self.universe.check(s.universe())?;
        self.universe.check(mask.universe())?;
        self.universe.op(OpKind::Pre);
        self.universe.op(OpKind::BasicSet);
        Ok(self.universe.wrap(self.image_in(&s.repr, &mask.repr, true)))
    }

    /// `Post_E(S) ∩ M`, metered as the image followed by one intersection.
    pub(crate) fn post_in(&self, s: &VertexSet, mask: &VertexSet) -> Result<VertexSet> {
        self.universe.check(s.universe())?;
        self.universe.check(mask.universe())?;
        self.universe.op(OpKind::Post);
        self.universe.op(OpKind::BasicSet);
        Ok(self.universe.wrap(self.image_in(&s.repr, &mask.repr, false)))
    }

    fn image_in(&self, s: &SetRepr, mask: &SetRepr, backward: bool) -> SetRepr {
        if let RelRepr::Adjacency(adj) = &self.repr {
            if mask.len() < s.len() {
                // a vertex of the mask is in the image iff one of its
                // neighbours in the opposite direction lies in `s`
                let lists = if backward { &adj.fwd } else { &adj.bwd };
                let hits = mask
                    .iter()
                    .filter(|&v| lists[v as usize].iter().any(|&w| s.contains(w)));
                return SetRepr::from_ids(self.universe.backend(), self.universe.size(), hits);
            }
        }
        self.image(s, backward).intersect(mask)
    }

    fn image(&self, s: &SetRepr, backward: bool) -> SetRepr {
        let backend = self.universe.backend();
        let n = self.universe.size();
        match &self.repr {
            RelRepr::Adjacency(adj) => {
                let lists = if backward { &adj.bwd } else { &adj.fwd };
                let it = s.iter().flat_map(|w| lists[w as usize].iter().copied());
                SetRepr::from_ids(backend, n, it)
            }
            RelRepr::Product { rows, cols } => {
                let (src, dst) = if backward { (rows, cols) } else { (cols, rows) };
                if dst.is_disjoint(s) {
                    SetRepr::empty(backend, n)
                } else {
                    src.clone()
                }
            }
        }
    }

    fn combine(&mut self, other: &EdgeRelation, op: RelOp) -> Result<()> {
        self.universe.check(&other.universe)?;
        self.universe.op(OpKind::BasicSet);
        let n = self.universe.size();
        let mut adj = match std::mem::replace(&mut self.repr, RelRepr::Adjacency(Adjacency::default())) {
            RelRepr::Adjacency(a) => a,
            p @ RelRepr::Product { .. } => p.materialize(n),
        };
        match (&other.repr, op) {
            (RelRepr::Product { rows, cols }, RelOp::Union) => adj.union_product(rows, cols),
            (RelRepr::Product { rows, cols }, RelOp::Difference) => adj.difference_product(rows, cols),
            (RelRepr::Product { rows, cols }, RelOp::Intersect) => adj.intersect_product(rows, cols),
            (RelRepr::Adjacency(o), RelOp::Union) => adj.zip_rows(o, merge_union_sorted),
            (RelRepr::Adjacency(o), RelOp::Intersect) => {
                adj.zip_rows(o, |a, b| super::set::merge_filter_sorted(a, b, true))
            }
            (RelRepr::Adjacency(o), RelOp::Difference) => {
                adj.zip_rows(o, |a, b| super::set::merge_filter_sorted(a, b, false))
            }
        }
        self.repr = RelRepr::Adjacency(adj);
        Ok(())
    }

    fn combined(&self, other: &EdgeRelation, op: RelOp) -> Result<EdgeRelation> {
        self.universe.check(&other.universe)?;
        let mut out = EdgeRelation::wrap(&self.universe, self.repr.clone());
        out.combine(other, op)?;
        Ok(out)
    }

    pub fn union(&self, other: &EdgeRelation) -> Result<EdgeRelation> {
        self.combined(other, RelOp::Union)
    }

    pub fn intersect(&self, other: &EdgeRelation) -> Result<EdgeRelation> {
        self.combined(other, RelOp::Intersect)
    }

    pub fn difference(&self, other: &EdgeRelation) -> Result<EdgeRelation> {
        self.combined(other, RelOp::Difference)
    }

    pub fn union_with(&mut self, other: &EdgeRelation) -> Result<()> {
        self.combine(other, RelOp::Union)
    }

    pub fn intersect_with(&mut self, other: &EdgeRelation) -> Result<()> {
        self.combine(other, RelOp::Intersect)
    }

    pub fn difference_with(&mut self, other: &EdgeRelation) -> Result<()> {
        self.combine(other, RelOp::Difference)
    }

    pub fn equals(&self, other: &EdgeRelation) -> Result<bool> {
        self.universe.check(&other.universe)?;
        self.universe.op(OpKind::BasicSet);
        let n = self.universe.size();
        Ok(self.repr.materialize(n).fwd == other.repr.materialize(n).fwd)
    }

    pub fn is_subset(&self, other: &EdgeRelation) -> Result<bool> {
        self.universe.check(&other.universe)?;
        self.universe.op(OpKind::BasicSet);
        let n = self.universe.size();
        let (a, b) = (self.repr.materialize(n), other.repr.materialize(n));
        Ok(a.fwd
            .iter()
            .zip(&b.fwd)
            .all(|(x, y)| super::set::merge_filter_sorted(x, y, false).is_empty()))
    }

    /// Explicit edge list in lexicographic order (unmetered).
    pub fn edges_unmetered(&self) -> Vec<(VertexId, VertexId)> {
        let adj = self.repr.materialize(self.universe.size());
        adj.fwd
            .iter()
            .enumerate()
            .flat_map(|(a, outs)| outs.iter().map(move |&b| (VertexId(a as u32), VertexId(b))))
            .collect()
    }

    pub fn edge_count_unmetered(&self) -> usize {
        match &self.repr {
            RelRepr::Adjacency(a) => a.edge_count(),
            RelRepr::Product { rows, cols } => rows.len() * cols.len(),
        }
    }

    /// Unmetered successor list of one vertex.
    pub fn successors_unmetered(&self, v: VertexId) -> Vec<VertexId> {
        match &self.repr {
            RelRepr::Adjacency(a) => a.fwd[v.index()].iter().map(|&w| VertexId(w)).collect(),
            RelRepr::Product { rows, cols } => {
                if rows.contains(v.0) {
                    cols.iter().map(VertexId).collect()
                } else {
                    Vec::new()
                }
            }
        }
    }
}

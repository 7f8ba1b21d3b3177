use super::relation::EdgeRelation;
use super::set::{Backend, Universe, VertexId, VertexSet};
use crate::error::{Error, Result};
use crate::explicit::ExplicitMdp;

/// An MDP held entirely as symbolic sets: the live vertex set, the player-1
/// and random partition, and the edge relation. Transition probabilities are
/// implicit (uniform over successors), so only edge presence matters.
#[derive(Debug)]
pub struct SymbolicMdp {
    universe: Universe,
    vertices: VertexSet,
    player1: VertexSet,
    random: VertexSet,
    edges: EdgeRelation,
}

impl SymbolicMdp {
    pub fn from_sets(vertices: VertexSet, player1: VertexSet, random: VertexSet, edges: EdgeRelation) -> Result<Self> {
        let universe = vertices.universe().clone();
        universe.check(player1.universe())?;
        universe.check(random.universe())?;
        universe.check(edges.universe())?;
        Ok(SymbolicMdp {
            universe,
            vertices,
            player1,
            random,
            edges,
        })
    }

    /// Mirrors an explicit MDP in a fresh universe.
    pub fn from_explicit(g: &ExplicitMdp, backend: Backend) -> Result<Self> {
        Self::from_explicit_in(g, &Universe::new(g.n(), backend))
    }

    pub fn from_explicit_in(g: &ExplicitMdp, universe: &Universe) -> Result<Self> {
        if universe.size() != g.n() {
            return Err(Error::UniverseMismatch {
                left: universe.size(),
                right: g.n(),
            });
        }
        let all = (0..g.n() as u32).map(VertexId);
        let vertices = universe.from_ids(all.clone())?;
        let player1 = universe.from_ids(all.clone().filter(|v| !g.is_random(v.index())))?;
        let random = universe.from_ids(all.filter(|v| g.is_random(v.index())))?;
        let edges = EdgeRelation::from_edges(
            universe,
            g.edges().map(|(a, b)| (VertexId(a as u32), VertexId(b as u32))),
        )?;
        Self::from_sets(vertices, player1, random, edges)
    }

    /// Explicit mirror of the current state. Vertices outside the live set
    /// appear as isolated player-1 vertices.
    pub fn to_explicit(&self) -> ExplicitMdp {
        let n = self.universe.size();
        let mut random = vec![false; n];
        for v in self.random.members() {
            random[v.index()] = true;
        }
        let edges = self
            .edges
            .edges_unmetered()
            .into_iter()
            .map(|(a, b)| (a.index(), b.index()));
        ExplicitMdp::from_edges(n, random, edges)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn player1(&self) -> &VertexSet {
        &self.player1
    }

    pub fn random(&self) -> &VertexSet {
        &self.random
    }

    pub fn edges(&self) -> &EdgeRelation {
        &self.edges
    }

    pub fn pre(&self, s: &VertexSet) -> Result<VertexSet> {
        self.edges.pre(s)
    }

    pub fn post(&self, s: &VertexSet) -> Result<VertexSet> {
        self.edges.post(s)
    }

    /// `Pre(S) ∩ M` (two operations).
    pub fn pre_in(&self, s: &VertexSet, mask: &VertexSet) -> Result<VertexSet> {
        self.edges.pre_in(s, mask)
    }

    /// `Post(S) ∩ M` (two operations).
    pub fn post_in(&self, s: &VertexSet, mask: &VertexSet) -> Result<VertexSet> {
        self.edges.post_in(s, mask)
    }

    /// Working copy sharing the meter (`P ← P'`): four new live sets, no
    /// operations.
    pub fn duplicate(&self) -> SymbolicMdp {
        SymbolicMdp {
            universe: self.universe.clone(),
            vertices: self.vertices.copy(),
            player1: self.player1.copy(),
            random: self.random.copy(),
            edges: self.edges.copy(),
        }
    }

    /// The sub-MDP `P[S]`: vertices `V ∩ S` and edges `E ∩ (S × S)`.
    pub fn restrict(&self, s: &VertexSet) -> Result<SymbolicMdp> {
        let vertices = self.vertices.intersect(s)?;
        let player1 = self.player1.intersect(&vertices)?;
        let random = self.random.intersect(&vertices)?;
        let square = vertices.product(&vertices)?;
        let edges = self.edges.intersect(&square)?;
        Ok(SymbolicMdp {
            universe: self.universe.clone(),
            vertices,
            player1,
            random,
            edges,
        })
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut VertexSet, &mut VertexSet, &mut VertexSet, &mut EdgeRelation) {
        (&mut self.vertices, &mut self.player1, &mut self.random, &mut self.edges)
    }

    /// Unmetered structural check of the model invariants: the partition
    /// covers the live set, edges stay inside it, no self-loops, and (when
    /// `require_out_edges`) every live vertex has a successor.
    pub fn validate(&self, require_out_edges: bool) -> Result<()> {
        let live = self.vertices.members();
        for &v in &live {
            let p1 = self.player1.contains_unmetered(v);
            let r = self.random.contains_unmetered(v);
            if p1 == r {
                return Err(Error::Validation(format!(
                    "vertex {v} must be in exactly one of V1 and VR"
                )));
            }
        }
        let live_count = live.len();
        if self.player1.len_unmetered() + self.random.len_unmetered() != live_count {
            return Err(Error::Validation("player partition covers dead vertices".into()));
        }
        let mut has_out = vec![false; self.universe.size()];
        for (a, b) in self.edges.edges_unmetered() {
            if a == b {
                return Err(Error::Validation(format!("self-loop on vertex {a}")));
            }
            if !self.vertices.contains_unmetered(a) || !self.vertices.contains_unmetered(b) {
                return Err(Error::Validation(format!("edge ({a}, {b}) leaves the live set")));
            }
            has_out[a.index()] = true;
        }
        if require_out_edges {
            if let Some(v) = live.iter().find(|v| !has_out[v.index()]) {
                return Err(Error::Validation(format!("vertex {v} has no outgoing edge")));
            }
        }
        Ok(())
    }
}

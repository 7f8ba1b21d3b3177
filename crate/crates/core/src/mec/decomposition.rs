use serde::Serialize;

use super::collapse::CollapseMap;
use super::symmec::{MecEvent, SymMec};
use crate::error::{Error, Result};
use crate::graph::SccStream;
use crate::symbolic::{SymbolicMdp, VertexId, VertexSet};

/// Non-trivial MECs over original vertex ids, each sorted and listed by
/// smallest member, plus the sorted vertices that belong to none of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MecDecomposition {
    pub mecs: Vec<Vec<VertexId>>,
    pub non_mec: Vec<VertexId>,
}

impl MecDecomposition {
    pub fn from_mecs(n: usize, mut mecs: Vec<Vec<VertexId>>) -> Self {
        mecs.sort();
        let mut covered = vec![false; n];
        for v in mecs.iter().flatten() {
            covered[v.index()] = true;
        }
        let non_mec = (0..n as u32).map(VertexId).filter(|v| !covered[v.index()]).collect();
        MecDecomposition { mecs, non_mec }
    }

    /// Vertices in some non-trivial MEC.
    pub fn covered(&self) -> Vec<VertexId> {
        let mut all: Vec<VertexId> = self.mecs.iter().flatten().copied().collect();
        all.sort();
        all
    }
}

/// Instrumentation of one decomposition run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MecStats {
    pub mec_count: usize,
    /// Deepest nesting of recursive calls.
    pub max_depth: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub events: Vec<MecEvent>,
}

/// MEC decomposition with the separator-based procedure.
pub fn symbolic_mec(p: &SymbolicMdp, gamma: usize) -> Result<(MecDecomposition, MecStats)> {
    let mut mecs = Vec::new();
    let stats = symbolic_mec_stream(p, gamma, false, |m| {
        mecs.push(m.members());
        Ok(())
    })?;
    Ok((MecDecomposition::from_mecs(p.universe().size(), mecs), stats))
}

/// Streaming form: every MEC is handed to `emit` as soon as it is known and
/// not kept afterwards.
///
/// Stage one runs the recursive procedure on every SCC of the input against
/// a working copy, collecting the vertices of all non-trivial ECs. Stage two
/// splits that set into SCCs of the untouched input, which are the MECs.
pub fn symbolic_mec_stream(
    p: &SymbolicMdp,
    gamma: usize,
    record_events: bool,
    mut emit: impl FnMut(VertexSet) -> Result<()>,
) -> Result<MecStats> {
    let u = p.universe();
    let mut work = p.duplicate();
    let mut runner = SymMec::new(gamma, CollapseMap::new(u.size()));
    if record_events {
        runner.record_events();
    }
    let mut m = u.empty();
    let mut sccs = SccStream::new(p, p.vertices(), None)?;
    while let Some(c) = sccs.next_scc(p)? {
        let mc = runner.run(&mut work, c)?;
        m.union_with(&mc)?;
    }
    drop(sccs);
    drop(work);

    let mut stats = MecStats {
        mec_count: 0,
        max_depth: runner.max_depth(),
        events: runner.take_events(),
    };
    let mut mecs = SccStream::new(p, &m, None)?;
    drop(m);
    while let Some(c) = mecs.next_scc(p)? {
        if c.cardinality() < 2 {
            return Err(Error::Invariant(format!(
                "vertex {} was reported in an end-component but is a trivial SCC",
                c.members()[0]
            )));
        }
        stats.mec_count += 1;
        emit(c)?;
    }
    Ok(stats)
}

/// `⌈(2√n + 2)·log2 n⌉`, the smallest separator parameter of the trade-off
/// window, capped at `n`.
pub fn default_gamma(n: usize) -> usize {
    gamma_floor(n).min(n.max(1))
}

/// `⌈n^(1−ε)·2·log2 n⌉` clamped to `[(2√n + 2)·log2 n, n]`. When the lower
/// end exceeds `n` the result is `n`.
pub fn gamma_for_epsilon(n: usize, epsilon: f64) -> usize {
    let lg = (n.max(2) as f64).log2();
    let raw = ((n as f64).powf(1.0 - epsilon) * 2.0 * lg).ceil() as usize;
    raw.max(gamma_floor(n)).min(n.max(1))
}

fn gamma_floor(n: usize) -> usize {
    let lg = (n.max(2) as f64).log2();
    ((2.0 * (n as f64).sqrt() + 2.0) * lg).ceil() as usize
}

/// Which decomposition a caller streams MECs from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "algo", rename_all = "snake_case")]
pub enum MecAlgorithm {
    Separator { gamma: usize },
    Classical,
}

impl MecAlgorithm {
    /// Separator-based with the default parameter for `n` vertices.
    pub fn default_for(n: usize) -> Self {
        MecAlgorithm::Separator {
            gamma: default_gamma(n),
        }
    }
}

pub fn mec_stream(p: &SymbolicMdp, algo: MecAlgorithm, emit: impl FnMut(VertexSet) -> Result<()>) -> Result<MecStats> {
    match algo {
        MecAlgorithm::Separator { gamma } => symbolic_mec_stream(p, gamma, false, emit),
        MecAlgorithm::Classical => super::classical::classical_mec_stream(p, emit),
    }
}

pub fn mec_decomposition(p: &SymbolicMdp, algo: MecAlgorithm) -> Result<(MecDecomposition, MecStats)> {
    let mut mecs = Vec::new();
    let stats = mec_stream(p, algo, |m| {
        mecs.push(m.members());
        Ok(())
    })?;
    Ok((MecDecomposition::from_mecs(p.universe().size(), mecs), stats))
}

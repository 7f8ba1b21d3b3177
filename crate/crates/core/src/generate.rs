//! Seeded random instance families.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::explicit::ExplicitMdp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Every vertex gets one random successor, then random extra edges up to
    /// the requested average degree.
    Uniform,
    /// Layers of about `√n` vertices with edges to the next layer and a few
    /// back edges; deep, narrow SCC structure.
    Layered,
    /// A long ring (large diameter) with a chain of 2-cycles whose random
    /// vertices peel off one at a time. Stresses separators and is a
    /// quadratic worst case for the classical decomposition.
    CycleChain,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Uniform, Family::Layered, Family::CycleChain];

    pub fn name(self) -> &'static str {
        match self {
            Family::Uniform => "uniform",
            Family::Layered => "layered",
            Family::CycleChain => "cycle-chain",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown family `{s}` (uniform, layered, cycle-chain)")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub family: Family,
    pub n: usize,
    pub avg_degree: f64,
    pub random_fraction: f64,
    /// Priorities are drawn from `0..=2d` when set.
    pub d: Option<u32>,
    pub seed: u64,
}

impl GenParams {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        GenParams {
            family,
            n,
            avg_degree: 4.0,
            random_fraction: 0.5,
            d: None,
            seed,
        }
    }
}

pub fn generate(params: &GenParams) -> Result<ExplicitMdp> {
    let min_n = match params.family {
        Family::CycleChain => 8,
        _ => 2,
    };
    if params.n < min_n {
        return Err(Error::Validation(format!(
            "family {} needs at least {min_n} vertices",
            params.family
        )));
    }
    if !(0.0..=1.0).contains(&params.random_fraction) {
        return Err(Error::Validation("random fraction must lie in [0, 1]".into()));
    }
    if params.avg_degree.is_nan() || params.avg_degree < 1.0 {
        return Err(Error::Validation("average degree must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (random, edges) = match params.family {
        Family::Uniform => uniform(params, &mut rng),
        Family::Layered => layered(params, &mut rng),
        Family::CycleChain => cycle_chain(params, &mut rng),
    };
    let mut g = ExplicitMdp::from_edges(params.n, random, edges);
    if let Some(d) = params.d {
        let pr = (0..params.n).map(|_| rng.gen_range(0..=2 * d)).collect();
        g = g.with_priorities(pr);
    }
    Ok(g)
}

struct EdgeSet {
    out: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl EdgeSet {
    fn new(n: usize) -> Self {
        EdgeSet {
            out: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    fn add(&mut self, a: usize, b: usize) -> bool {
        if a == b || self.out[a].contains(&b) {
            return false;
        }
        self.out[a].push(b);
        self.edges.push((a, b));
        true
    }
}

fn flags(n: usize, fraction: f64, rng: &mut ChaCha8Rng) -> Vec<bool> {
    (0..n).map(|_| rng.gen_bool(fraction)).collect()
}

fn uniform(params: &GenParams, rng: &mut ChaCha8Rng) -> (Vec<bool>, Vec<(usize, usize)>) {
    let n = params.n;
    let random = flags(n, params.random_fraction, rng);
    let mut es = EdgeSet::new(n);
    for v in 0..n {
        let w = (v + rng.gen_range(1..n)) % n;
        es.add(v, w);
    }
    let target = ((n as f64 * params.avg_degree).round() as usize).min(n * (n - 1));
    while es.edges.len() < target {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        es.add(a, b);
    }
    (random, es.edges)
}

fn layered(params: &GenParams, rng: &mut ChaCha8Rng) -> (Vec<bool>, Vec<(usize, usize)>) {
    let n = params.n;
    let width = ((n as f64).sqrt().round() as usize).max(1);
    let layer_of = |v: usize| v / width;
    let last = layer_of(n - 1);
    let random = flags(n, params.random_fraction, rng);
    let mut es = EdgeSet::new(n);
    let forward = (params.avg_degree.round() as usize).max(1);
    for v in 0..n {
        let l = layer_of(v);
        if l == last {
            // close the DAG into a few big cycles
            es.add(v, rng.gen_range(0..width.min(n)));
            continue;
        }
        let lo = (l + 1) * width;
        let hi = ((l + 2) * width).min(n);
        for _ in 0..forward {
            es.add(v, rng.gen_range(lo..hi));
        }
        if rng.gen_bool(1.0 / width as f64) {
            es.add(v, rng.gen_range(0..lo.saturating_sub(width).max(1)));
        }
    }
    (random, es.edges)
}

/// Layout: a directed ring of about `0.7·n` player-1 or random vertices,
/// then ladder triples `(x_i, y_i, z_i)`, then a player-1 sink 2-cycle.
/// `x_i, z_i` are player-1 and form a 2-cycle, `x_i → y_{i+1}`, `y_i` is
/// random with edges to `x_i` and the ring, and the ring has an edge into
/// every `x_i` (at evenly spaced anchors). Only the last `y` leaks (to the sink); removing `y_{i+1}`
/// cuts `{x_i, z_i}` off the ring, which makes `y_i` leak next. The ring
/// gives the main SCC a diameter linear in `n`. The degree parameter is not
/// used, since extra edges would shortcut the ring.
fn cycle_chain(params: &GenParams, rng: &mut ChaCha8Rng) -> (Vec<bool>, Vec<(usize, usize)>) {
    let n = params.n;
    let k = (n - 2) / 10;
    let b = n - 2 - 3 * k;
    let mut random = vec![false; n];
    let mut es = EdgeSet::new(n);
    for v in 0..b {
        es.add(v, (v + 1) % b);
    }

    let x = |i: usize| b + 3 * i;
    let y = |i: usize| b + 3 * i + 1;
    let z = |i: usize| b + 3 * i + 2;
    let mut anchors = vec![false; b];
    for i in 0..k {
        random[y(i)] = true;
        es.add(x(i), z(i));
        es.add(z(i), x(i));
        es.add(y(i), x(i));
        // back to the ring just after the previous anchor, so the ladder
        // never shortcuts the ring
        let back = if i == 0 { 0 } else { ((i - 1) * b / k + 1) % b };
        es.add(y(i), back);
        if i + 1 < k {
            es.add(x(i), y(i + 1));
        }
        let anchor = i * b / k.max(1);
        anchors[anchor] = true;
        es.add(anchor, x(i));
    }
    let (s1, s2) = (n - 2, n - 1);
    es.add(s1, s2);
    es.add(s2, s1);
    if k > 0 {
        es.add(y(k - 1), s1);
    }
    let mut order: Vec<usize> = (0..b).collect();
    order.shuffle(rng);
    for v in order {
        if !anchors[v] && rng.gen_bool(params.random_fraction) {
            random[v] = true;
        }
    }
    (random, es.edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explicit::explicit_mec;

    #[test]
    fn same_seed_same_instance() {
        for family in Family::ALL {
            let p = GenParams::new(family, 60, 7);
            assert_eq!(generate(&p).unwrap(), generate(&p).unwrap());
            generate(&p).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn uniform_edge_count_window() {
        let mut p = GenParams::new(Family::Uniform, 1000, 3);
        p.avg_degree = 4.0;
        let g = generate(&p).unwrap();
        assert!(g.m() >= 1000 && g.m() <= 8000);
        p.random_fraction = 0.0;
        let g = generate(&p).unwrap();
        assert!((0..g.n()).all(|v| !g.is_random(v)));
    }

    #[test]
    fn cycle_chain_mecs() {
        let mut p = GenParams::new(Family::CycleChain, 102, 1);
        p.random_fraction = 0.0;
        let g = generate(&p).unwrap();
        g.validate().unwrap();
        let d = explicit_mec(&g);
        // ring, every {x_i, z_i}, and the sink
        assert_eq!(d.mecs.len(), 1 + 10 + 1);
        assert_eq!(d.non_mec.len(), 10);
    }
}

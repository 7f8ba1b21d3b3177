//! Explicit-graph reference implementations.
//!
//! These work on adjacency lists with plain worklist algorithms and share no
//! code with the symbolic algorithms, so that cross-checks between the two
//! are meaningful. None of them is meant for large instances.

use crate::error::{Error, Result};

/// An MDP as adjacency lists. Also the interchange format between the file
/// front end, the generators and the symbolic model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitMdp {
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    random: Vec<bool>,
    priority: Option<Vec<u32>>,
}

impl ExplicitMdp {
    /// Builds the adjacency lists; duplicate edges are merged.
    pub fn from_edges<I>(n: usize, random: Vec<bool>, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        assert_eq!(random.len(), n);
        let mut out_adj = vec![Vec::new(); n];
        for (a, b) in edges {
            out_adj[a].push(b);
        }
        for row in &mut out_adj {
            row.sort_unstable();
            row.dedup();
        }
        let mut in_adj = vec![Vec::new(); n];
        for (a, outs) in out_adj.iter().enumerate() {
            for &b in outs {
                in_adj[b].push(a);
            }
        }
        ExplicitMdp {
            out_adj,
            in_adj,
            random,
            priority: None,
        }
    }

    pub fn with_priorities(mut self, priority: Vec<u32>) -> Self {
        assert_eq!(priority.len(), self.n());
        self.priority = Some(priority);
        self
    }

    pub fn n(&self) -> usize {
        self.out_adj.len()
    }

    pub fn m(&self) -> usize {
        self.out_adj.iter().map(Vec::len).sum()
    }

    pub fn is_random(&self, v: usize) -> bool {
        self.random[v]
    }

    pub fn random_flags(&self) -> &[bool] {
        &self.random
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn priorities(&self) -> Option<&[u32]> {
        self.priority.as_deref()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + Clone + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(a, outs)| outs.iter().map(move |&b| (a, b)))
    }

    /// Checks the standing assumptions: no self-loops and at least one
    /// outgoing edge per vertex.
    pub fn validate(&self) -> Result<()> {
        for (v, outs) in self.out_adj.iter().enumerate() {
            if outs.contains(&v) {
                return Err(Error::Validation(format!(
                    "self-loop on vertex {v} (MDP vertices must not have self-loops)"
                )));
            }
            if outs.is_empty() {
                return Err(Error::Validation(format!(
                    "vertex {v} has no outgoing edge (every vertex needs a successor)"
                )));
            }
        }
        Ok(())
    }
}

/// Non-trivial MECs (each sorted, list sorted by smallest member) and the
/// sorted list of vertices in none of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitMecs {
    pub mecs: Vec<Vec<usize>>,
    pub non_mec: Vec<usize>,
}

/// Iterative Tarjan over the whole graph.
pub fn tarjan_scc(g: &ExplicitMdp) -> Vec<Vec<usize>> {
    tarjan_scc_within(g, &vec![true; g.n()])
}

/// Iterative Tarjan over the subgraph induced by `mask`. Components are
/// returned sorted internally and ordered by smallest member.
pub fn tarjan_scc_within(g: &ExplicitMdp, mask: &[bool]) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = g.n();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut out = Vec::new();
    // (vertex, position in successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if !mask[root] || index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = g.successors(v);
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if !mask[w] {
                    continue;
                }
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out.sort();
    out
}

/// Random attractor of `target` inside the sub-MDP induced by `mask`:
/// random vertices with some edge into the attractor and player-1 vertices
/// with all (in-mask) edges into it.
pub fn explicit_attractor(g: &ExplicitMdp, mask: &[bool], target: &[bool]) -> Vec<bool> {
    attractor_avoiding(g, mask, target, &vec![false; g.n()])
}

// vertices in `avoid` never join (unless they are targets)
fn attractor_avoiding(g: &ExplicitMdp, mask: &[bool], target: &[bool], avoid: &[bool]) -> Vec<bool> {
    let n = g.n();
    let mut attr = vec![false; n];
    let mut remaining = vec![0usize; n];
    let mut queue = Vec::new();
    for v in 0..n {
        if !mask[v] {
            continue;
        }
        remaining[v] = g.successors(v).iter().filter(|&&w| mask[w]).count();
        if target[v] {
            attr[v] = true;
            queue.push(v);
        }
    }
    while let Some(w) = queue.pop() {
        for &u in g.predecessors(w) {
            if !mask[u] || attr[u] || avoid[u] {
                continue;
            }
            remaining[u] -= 1;
            if g.is_random(u) || remaining[u] == 0 {
                attr[u] = true;
                queue.push(u);
            }
        }
    }
    attr
}

/// Classical MEC decomposition: repeatedly split into SCCs and remove the
/// random attractor of the random vertices that leak out of their SCC.
pub fn explicit_mec(g: &ExplicitMdp) -> ExplicitMecs {
    explicit_mec_within(g, &vec![true; g.n()])
}

/// MEC decomposition of the sub-MDP induced by `mask`. `non_mec` lists the
/// masked vertices outside every non-trivial MEC.
pub fn explicit_mec_within(g: &ExplicitMdp, mask: &[bool]) -> ExplicitMecs {
    let n = g.n();
    let mut mecs = Vec::new();
    let mut work: Vec<Vec<usize>> = vec![(0..n).filter(|&v| mask[v]).collect()];
    let mut inside = vec![false; n];
    while let Some(candidate) = work.pop() {
        if candidate.len() < 2 {
            continue;
        }
        let mut cmask = vec![false; n];
        for &v in &candidate {
            cmask[v] = true;
        }
        for comp in tarjan_scc_within(g, &cmask) {
            if comp.len() < 2 {
                continue;
            }
            for &v in &comp {
                inside[v] = true;
            }
            let leaking: Vec<bool> = (0..n)
                .map(|v| inside[v] && g.is_random(v) && g.successors(v).iter().any(|&w| mask[w] && !inside[w]))
                .collect();
            if leaking.iter().any(|&b| b) {
                let attr = explicit_attractor(g, &inside, &leaking);
                work.push(comp.iter().copied().filter(|&v| !attr[v]).collect());
            } else {
                mecs.push(comp.clone());
            }
            for &v in &comp {
                inside[v] = false;
            }
        }
    }
    mecs.sort();
    let mut in_mec = vec![false; n];
    for c in &mecs {
        for &v in c {
            in_mec[v] = true;
        }
    }
    let non_mec = (0..n).filter(|&v| mask[v] && !in_mec[v]).collect();
    ExplicitMecs { mecs, non_mec }
}

/// Whether `set` is a non-trivial end-component: at least two vertices,
/// strongly connected, and closed under the edges of its random vertices.
pub fn is_end_component(g: &ExplicitMdp, set: &[usize]) -> bool {
    if set.len() < 2 {
        return false;
    }
    let mut mask = vec![false; g.n()];
    for &v in set {
        mask[v] = true;
    }
    let closed = set
        .iter()
        .filter(|&&v| g.is_random(v))
        .all(|&v| g.successors(v).iter().all(|&w| mask[w]));
    closed && tarjan_scc_within(g, &mask).len() == 1
}

/// Almost-sure reachability by the classical fixpoint: shrink the candidate
/// region `W` by the random attractor of everything that cannot reach the
/// target inside `W`, until stable. Target vertices are won on arrival, so
/// the attractor never enters them.
pub fn explicit_asw_reach(g: &ExplicitMdp, target: &[bool]) -> Vec<bool> {
    let n = g.n();
    let all = vec![true; n];
    let mut win = vec![true; n];
    loop {
        // vertices of `win` that reach the target through `win`
        let mut reach = vec![false; n];
        let mut queue: Vec<usize> = (0..n).filter(|&v| win[v] && target[v]).collect();
        for &v in &queue {
            reach[v] = true;
        }
        while let Some(w) = queue.pop() {
            for &u in g.predecessors(w) {
                if win[u] && !reach[u] {
                    reach[u] = true;
                    queue.push(u);
                }
            }
        }
        let bad: Vec<bool> = (0..n).map(|v| !win[v] || !reach[v]).collect();
        let attr = attractor_avoiding(g, &all, &bad, target);
        let next: Vec<bool> = (0..n).map(|v| !attr[v]).collect();
        if next == win {
            return win;
        }
        win = next;
    }
}

/// Union over all `ℓ` of the MECs of `P_ℓ` (the MDP without the random
/// attractor of priorities below `ℓ`) whose smallest priority is `ℓ` and even.
pub fn explicit_winning_ecs(g: &ExplicitMdp, priority: &[u32]) -> Vec<bool> {
    let n = g.n();
    let all = vec![true; n];
    let top = priority.iter().copied().max().unwrap_or(0);
    let mut we = vec![false; n];
    for level in (0..=top).step_by(2) {
        let low: Vec<bool> = priority.iter().map(|&p| p < level).collect();
        let removed = explicit_attractor(g, &all, &low);
        let mask: Vec<bool> = removed.iter().map(|&r| !r).collect();
        for mec in explicit_mec_within(g, &mask).mecs {
            let min = mec.iter().map(|&v| priority[v]).min().unwrap();
            if min == level {
                for v in mec {
                    we[v] = true;
                }
            }
        }
    }
    we
}

pub fn explicit_asw_parity(g: &ExplicitMdp, priority: &[u32]) -> Vec<bool> {
    explicit_asw_reach(g, &explicit_winning_ecs(g, priority))
}

/// Number of BFS layers beyond the root inside `mask` (the eccentricity of
/// `root`), following edges forward or backward.
pub fn bfs_depth(g: &ExplicitMdp, mask: &[bool], root: usize, forward: bool) -> usize {
    let mut dist = vec![usize::MAX; g.n()];
    dist[root] = 0;
    let mut frontier = vec![root];
    let mut depth = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &v in &frontier {
            let nbrs = if forward { g.successors(v) } else { g.predecessors(v) };
            for &w in nbrs {
                if mask[w] && dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    next.push(w);
                }
            }
        }
        if !next.is_empty() {
            depth += 1;
        }
        frontier = next;
    }
    depth
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, random: &[usize], edges: &[(usize, usize)]) -> ExplicitMdp {
        let mut flags = vec![false; n];
        for &r in random {
            flags[r] = true;
        }
        ExplicitMdp::from_edges(n, flags, edges.iter().copied())
    }

    #[test]
    fn tarjan_cycle_and_dag() {
        let cyc = graph(3, &[], &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(tarjan_scc(&cyc), vec![vec![0, 1, 2]]);
        let dag = graph(3, &[], &[(0, 1), (1, 2)]);
        assert_eq!(tarjan_scc(&dag), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn one_ec_mdp() {
        let g = graph(3, &[1], &[(0, 1), (1, 0), (1, 2), (2, 0)]);
        let d = explicit_mec(&g);
        assert_eq!(d.mecs, vec![vec![0, 1, 2]]);
        assert!(d.non_mec.is_empty());
    }

    #[test]
    fn leaking_random_chain_has_no_mec() {
        // 0 ↔ 1 and 2 ↔ 3 are cycles through random vertices 1 and 3 that also
        // leak to 4; 4 → 5 → 4 is a sink cycle through random 5 leaking to 0.
        let g = graph(
            6,
            &[1, 3, 5],
            &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 2), (3, 4), (4, 5), (5, 4), (5, 0)],
        );
        let d = explicit_mec(&g);
        // the whole graph is one SCC and closed, hence a single MEC
        assert_eq!(d.mecs, vec![vec![0, 1, 2, 3, 4, 5]]);

        // break the cycle back to 0: now 4 ↔ 5 leaks nowhere but 5 is random
        // and 3 leaks into it.
        let g = graph(
            7,
            &[1, 3, 5],
            &[
                (0, 1),
                (1, 0),
                (1, 2),
                (2, 3),
                (3, 2),
                (3, 4),
                (4, 5),
                (5, 4),
                (5, 6),
                (6, 4),
            ],
        );
        let d = explicit_mec(&g);
        assert_eq!(d.mecs, vec![vec![4, 5, 6]]);
        assert_eq!(d.non_mec, vec![0, 1, 2, 3]);
        for m in &d.mecs {
            assert!(is_end_component(&g, m));
        }
    }

    #[test]
    fn attractor_example() {
        // a=0 ∈ V1, b=1 ∈ VR, c=2; edges a→b, b→c, b→a, c→a
        let g = graph(3, &[1], &[(0, 1), (1, 2), (1, 0), (2, 0)]);
        let attr = explicit_attractor(&g, &[true; 3], &[false, false, true]);
        assert_eq!(attr, vec![true, true, true]);
    }

    #[test]
    fn parity_degenerate_cases() {
        let g = graph(3, &[1], &[(0, 1), (1, 0), (1, 2), (2, 0)]);
        assert_eq!(explicit_asw_parity(&g, &[0, 0, 0]), vec![true; 3]);
        assert_eq!(explicit_asw_parity(&g, &[1, 1, 3]), vec![false; 3]);
        assert_eq!(explicit_asw_reach(&g, &[true; 3]), vec![true; 3]);
    }

    #[test]
    fn validation_rejects_self_loops_and_sinks() {
        assert!(graph(2, &[], &[(0, 0), (1, 0)]).validate().is_err());
        assert!(graph(2, &[], &[(0, 1)]).validate().is_err());
        assert!(graph(2, &[], &[(0, 1), (1, 0)]).validate().is_ok());
    }

    // νY. μX. T ∪ (V1 ∩ Pre∃(X)) ∪ (VR ∩ Pre∀(Y) ∩ Pre∃(X))
    fn asw_reach_fixpoint(g: &ExplicitMdp, target: &[bool]) -> Vec<bool> {
        let n = g.n();
        let mut y = vec![true; n];
        loop {
            let mut x = target.to_vec();
            loop {
                let next: Vec<bool> = (0..n)
                    .map(|v| {
                        let some = g.successors(v).iter().any(|&w| x[w]);
                        x[v] || (some && (!g.is_random(v) || g.successors(v).iter().all(|&w| y[w])))
                    })
                    .collect();
                if next == x {
                    break;
                }
                x = next;
            }
            if x == y {
                return y;
            }
            y = x;
        }
    }

    #[test]
    fn asw_reach_agrees_with_nested_fixpoint() {
        use crate::generate::{generate, Family, GenParams};
        for seed in 0..300u64 {
            let mut params = GenParams::new(Family::ALL[seed as usize % 3], 8 + seed as usize % 30, seed);
            params.avg_degree = [1.0, 1.5, 2.5][seed as usize % 3];
            params.random_fraction = [0.2, 0.5, 0.8][(seed / 3) as usize % 3];
            let g = generate(&params).unwrap();
            let target: Vec<bool> = (0..g.n()).map(|v| (v as u64 * 5 + seed) % 7 == 0).collect();
            assert_eq!(
                explicit_asw_reach(&g, &target),
                asw_reach_fixpoint(&g, &target),
                "seed {seed}"
            );
        }
    }
}

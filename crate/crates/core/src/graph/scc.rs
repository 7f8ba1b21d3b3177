use crate::error::{Error, Result};
use crate::symbolic::{SymbolicMdp, VertexId, VertexSet};

/// A pending subproblem: vertex set `v`, spine (a path ending in `node`),
/// and the node the next forward search starts from. An empty node means the
/// start is picked freely.
struct Task {
    v: VertexSet,
    spine: VertexSet,
    node: VertexSet,
}

/// Lazily emits the SCCs of the graph induced by a vertex set, one per call
/// to [`SccStream::next_scc`]. Skeleton-based forward search: every forward
/// BFS yields one SCC plus a spine that seeds the next search, so the total
/// work is linear in the sum of SCC diameters.
///
/// Pending subproblems are kept on a stack with the smaller one on top,
/// which bounds the stack by `O(log n)` entries.
pub struct SccStream {
    stack: Vec<Task>,
}

/// SCCs of `P` restricted to `restrict`, optionally starting with the SCC of
/// `start`.
pub fn scc_find(p: &SymbolicMdp, restrict: &VertexSet, start: Option<VertexId>) -> Result<SccStream> {
    SccStream::new(p, restrict, start)
}

/// Collects the whole stream.
pub fn scc_decompose(p: &SymbolicMdp, restrict: &VertexSet) -> Result<Vec<VertexSet>> {
    let mut stream = SccStream::new(p, restrict, None)?;
    let mut out = Vec::new();
    while let Some(c) = stream.next_scc(p)? {
        out.push(c);
    }
    Ok(out)
}

impl SccStream {
    pub fn new(p: &SymbolicMdp, restrict: &VertexSet, start: Option<VertexId>) -> Result<Self> {
        let v = restrict.intersect(p.vertices())?;
        let u = p.universe();
        let (spine, node) = match start {
            Some(s) => {
                if !v.contains_unmetered(s) {
                    return Err(Error::contract(format!(
                        "start vertex {s} is not in the restriction set"
                    )));
                }
                (u.singleton(s)?, u.singleton(s)?)
            }
            None => (u.empty(), u.empty()),
        };
        Ok(SccStream {
            stack: vec![Task { v, spine, node }],
        })
    }

    /// Number of pending subproblems (each holds three sets).
    pub fn pending(&self) -> usize {
        self.stack.len()
    }

    /// Next SCC, or `None` once every vertex has been emitted. The MDP may
    /// change between calls as long as edges among not-yet-emitted vertices
    /// are preserved (collapsing inside an emitted SCC is fine).
    pub fn next_scc(&mut self, p: &SymbolicMdp) -> Result<Option<VertexSet>> {
        loop {
            let Some(task) = self.stack.pop() else {
                return Ok(None);
            };
            if task.v.is_empty() {
                continue;
            }
            return self.step(p, task).map(Some);
        }
    }

    fn step(&mut self, p: &SymbolicMdp, task: Task) -> Result<VertexSet> {
        let Task { v, spine, node } = task;
        let u = p.universe();
        let node = u.singleton(if node.is_empty() { v.pick()? } else { node.pick()? })?;

        let forward = skeleton_forward(p, &v, &node)?;

        // backward closure of the start node inside the forward set
        let mut scc = node.copy();
        let mut frontier = node;
        loop {
            let mut next = p.pre_in(&frontier, &forward.fw)?;
            next.difference_with(&scc)?;
            if next.is_empty() {
                break;
            }
            scc.union_with(&next)?;
            frontier = next;
        }
        drop(frontier);

        // outside the forward set: the rest of the old spine, restarted at
        // the predecessor of its part that was just emitted
        let mut v1 = v;
        v1.difference_with(&forward.fw)?;
        let spine_in_scc = spine.intersect(&scc)?;
        let mut spine1 = spine;
        spine1.difference_with(&scc)?;
        let node1 = p.pre_in(&spine_in_scc, &spine1)?;
        drop(spine_in_scc);

        // inside the forward set: the new skeleton minus the SCC
        let Forward {
            fw: mut v2,
            spine: mut spine2,
            node: mut node2,
        } = forward;
        v2.difference_with(&scc)?;
        spine2.difference_with(&scc)?;
        node2.difference_with(&scc)?;

        let first = Task {
            v: v1,
            spine: spine1,
            node: node1,
        };
        let second = Task {
            v: v2,
            spine: spine2,
            node: node2,
        };
        if first.v.cardinality() >= second.v.cardinality() {
            self.stack.push(first);
            self.stack.push(second);
        } else {
            self.stack.push(second);
            self.stack.push(first);
        }
        Ok(scc)
    }
}

struct Forward {
    fw: VertexSet,
    spine: VertexSet,
    node: VertexSet,
}

/// A stored BFS state: layer `k` and everything visited up to it.
struct Checkpoint {
    depth: usize,
    layer: VertexSet,
    visited: VertexSet,
}

/// Forward BFS from `node` inside `v`, returning the visited set, a shortest
/// path from `node` to a vertex of the last layer, and that vertex.
///
/// Layers are needed in reverse order to trace the path back. Instead of
/// keeping all `D` of them, every `B`-th layer is kept as a checkpoint with
/// `B` doubling whenever more than `B` checkpoints accumulate; the layers
/// between two checkpoints are recomputed during the backward walk. This
/// keeps `O(√D)` sets alive and costs `O(D)` operations.
fn skeleton_forward(p: &SymbolicMdp, v: &VertexSet, node: &VertexSet) -> Result<Forward> {
    let mut stride = 1usize;
    let mut checkpoints = vec![Checkpoint {
        depth: 0,
        layer: node.copy(),
        visited: node.copy(),
    }];
    let mut visited = node.copy();
    let mut layer = node.copy();
    let mut depth = 0;
    loop {
        let mut next = p.post_in(&layer, v)?;
        next.difference_with(&visited)?;
        if next.is_empty() {
            break;
        }
        visited.union_with(&next)?;
        layer = next;
        depth += 1;
        if depth % stride == 0 {
            checkpoints.push(Checkpoint {
                depth,
                layer: layer.copy(),
                visited: visited.copy(),
            });
            if checkpoints.len() > stride + 1 {
                stride *= 2;
                checkpoints.retain(|c| c.depth % stride == 0);
            }
        }
    }

    let u = p.universe();
    let end = u.singleton(layer.pick()?)?;
    drop(layer);
    let mut spine = end.copy();
    let mut cur = end.copy();
    let mut top = depth;
    while let Some(cp) = checkpoints.pop() {
        // layers cp.depth ..= top - 1, rebuilt from the checkpoint
        let mut segment = Vec::new();
        if cp.depth < top {
            let mut seen = cp.visited;
            let mut l = cp.layer;
            for _ in cp.depth + 1..top {
                let mut next = p.post_in(&l, v)?;
                next.difference_with(&seen)?;
                seen.union_with(&next)?;
                segment.push(l);
                l = next;
            }
            segment.push(l);
        }
        while let Some(l) = segment.pop() {
            let prev = p.pre_in(&cur, &l)?;
            cur = u.singleton(prev.pick()?)?;
            spine.union_with(&cur)?;
        }
        top = cp.depth;
    }
    debug_assert_eq!(top, 0);
    Ok(Forward {
        fw: visited,
        spine,
        node: end,
    })
}

/// The SCC of `v` in the graph induced by `restrict`: forward reachable set
/// intersected with the backward closure inside it.
pub fn scc_containing(p: &SymbolicMdp, restrict: &VertexSet, v: VertexId) -> Result<VertexSet> {
    let within = restrict.intersect(p.vertices())?;
    if !within.contains_unmetered(v) {
        return Err(Error::contract(format!("vertex {v} is not in the restriction set")));
    }
    let root = p.universe().singleton(v)?;
    let mut fw = root.copy();
    let mut frontier = root.copy();
    loop {
        let mut next = p.post_in(&frontier, &within)?;
        next.difference_with(&fw)?;
        if next.is_empty() {
            break;
        }
        fw.union_with(&next)?;
        frontier = next;
    }
    drop(within);
    let mut scc = root.copy();
    frontier = root;
    loop {
        let mut next = p.pre_in(&frontier, &fw)?;
        next.difference_with(&scc)?;
        if next.is_empty() {
            break;
        }
        scc.union_with(&next)?;
        frontier = next;
    }
    Ok(scc)
}

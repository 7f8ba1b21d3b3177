use serde::Serialize;

use super::collapse::{collapse_ec, rout, CollapseMap};
use crate::error::{Error, Result};
use crate::graph::{random_attractor_in, scc_containing, separator, SccStream};
use crate::symbolic::{SymbolicMdp, VertexId, VertexSet};

/// One step of a recorded run, over the ids of the working MDP.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum MecEvent {
    /// A frame starts (or restarts on a deferred SCC) with this set.
    Enter {
        set: Vec<VertexId>,
    },
    /// The set is an end-component as a whole.
    WholeEc {
        set: Vec<VertexId>,
    },
    Separator {
        separator: Vec<VertexId>,
    },
    /// Incremental step: the SCC of `vertex` after adding it back.
    Incremental {
        vertex: VertexId,
        scc: Vec<VertexId>,
    },
    /// The attractor of the leaking vertices swallowed that SCC.
    NoNewEc {
        vertex: VertexId,
    },
    Collapse {
        representative: VertexId,
        members: Vec<VertexId>,
    },
}

/// State shared by the recursive calls of the separator-based procedure:
/// the separator parameter, the collapse bookkeeping and instrumentation.
#[derive(Debug)]
pub struct SymMec {
    gamma: usize,
    map: CollapseMap,
    depth: usize,
    max_depth: usize,
    events: Option<Vec<MecEvent>>,
}

/// Vertices of all non-trivial end-components inside the strongly connected
/// set `s` of `p`, collapsing each of them in `p`.
pub fn sym_mec(p: &mut SymbolicMdp, s: VertexSet, gamma: usize, map: CollapseMap) -> Result<(VertexSet, CollapseMap)> {
    let mut runner = SymMec::new(gamma, map);
    let m = runner.run(p, s)?;
    Ok((m, runner.into_map()))
}

impl SymMec {
    pub fn new(gamma: usize, map: CollapseMap) -> Self {
        SymMec {
            gamma,
            map,
            depth: 0,
            max_depth: 0,
            events: None,
        }
    }

    pub fn record_events(&mut self) {
        self.events = Some(Vec::new());
    }

    pub fn take_events(&mut self) -> Vec<MecEvent> {
        self.events.take().unwrap_or_default()
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn map(&self) -> &CollapseMap {
        &self.map
    }

    pub fn into_map(self) -> CollapseMap {
        self.map
    }

    fn log(&mut self, event: impl FnOnce() -> MecEvent) {
        if let Some(ev) = self.events.as_mut() {
            ev.push(event());
        }
    }

    fn collapse(&mut self, p: &mut SymbolicMdp, x: &VertexSet) -> Result<()> {
        let members = x.members();
        let representative = collapse_ec(p, x, &mut self.map)?;
        self.log(|| MecEvent::Collapse {
            representative,
            members,
        });
        Ok(())
    }

    /// One call of the recursive procedure. A deferred SCC of at least half
    /// the size is handled by restarting this frame instead of recursing.
    pub fn run(&mut self, p: &mut SymbolicMdp, s: VertexSet) -> Result<VertexSet> {
        self.depth += 1;
        self.max_depth = self.max_depth.max(self.depth);
        let result = self.frame(p, s);
        self.depth -= 1;
        result
    }

    fn frame(&mut self, p: &mut SymbolicMdp, mut s: VertexSet) -> Result<VertexSet> {
        let u = p.universe().clone();
        let mut m = u.empty();
        loop {
            self.log(|| MecEvent::Enter { set: s.members() });
            let size = s.cardinality();
            if size <= 1 {
                return Ok(m);
            }
            let leaking = rout(p, &s)?;
            if leaking.is_empty() {
                self.log(|| MecEvent::WholeEc { set: s.members() });
                self.collapse(p, &s)?;
                m.union_with(&s)?;
                return Ok(m);
            }

            let t = separator(p, &s, self.gamma, None)?;
            if !t.is_empty() {
                drop(leaking);
                self.separated(p, &s, t, &mut m)?;
                return Ok(m);
            }
            drop(t);

            let x = random_attractor_in(p, &s, &leaking)?;
            drop(leaking);
            let rest = s.difference(&x)?;
            drop(x);
            let mut stream = SccStream::new(p, &rest, None)?;
            drop(rest);
            let mut deferred: Option<VertexSet> = None;
            while let Some(sj) = stream.next_scc(p)? {
                let k = sj.cardinality();
                if deferred.is_none() && 2 * k >= size && k > 1 {
                    deferred = Some(sj);
                    continue;
                }
                let mj = self.run(p, sj)?;
                m.union_with(&mj)?;
            }
            match deferred {
                Some(d) => s = d,
                None => return Ok(m),
            }
        }
    }

    /// Runs one frame on `s` taking `t` as its separator instead of
    /// computing one. `s` must be strongly connected and not an
    /// end-component, and `t` a non-empty subset of it.
    pub fn run_with_separator(&mut self, p: &mut SymbolicMdp, s: VertexSet, t: VertexSet) -> Result<VertexSet> {
        if t.is_empty() || !t.is_subset(&s)? {
            return Err(Error::contract("separator must be a non-empty subset of S"));
        }
        self.depth += 1;
        self.max_depth = self.max_depth.max(self.depth);
        self.log(|| MecEvent::Enter { set: s.members() });
        let mut m = p.universe().empty();
        let result = self.separated(p, &s, t, &mut m);
        self.depth -= 1;
        result.map(|()| m)
    }

    fn separated(&mut self, p: &mut SymbolicMdp, s: &VertexSet, t: VertexSet, m: &mut VertexSet) -> Result<()> {
        self.log(|| MecEvent::Separator { separator: t.members() });
        let a = random_attractor_in(p, s, &t)?;
        let rest = s.difference(&a)?;
        drop(a);
        let mut stream = SccStream::new(p, &rest, None)?;
        drop(rest);
        while let Some(sj) = stream.next_scc(p)? {
            let mj = self.run(p, sj)?;
            m.union_with(&mj)?;
        }
        drop(stream);
        self.incremental(p, s, t, m)
    }

    /// Adds the separator vertices back one at a time and collapses the
    /// end-component each of them closes, if any.
    fn incremental(&mut self, p: &mut SymbolicMdp, s: &VertexSet, mut t: VertexSet, m: &mut VertexSet) -> Result<()> {
        let u = p.universe().clone();
        while !t.is_empty() {
            let v = t.pick()?;
            let vs = u.singleton(v)?;
            t.difference_with(&vs)?;
            drop(vs);
            let within = s.difference(&t)?;
            let mut sp = scc_containing(p, &within, v)?;
            drop(within);
            if sp.cardinality() == 1 {
                continue;
            }
            self.log(|| MecEvent::Incremental {
                vertex: v,
                scc: sp.members(),
            });
            let leaking = rout(p, &sp)?;
            let z = random_attractor_in(p, &sp, &leaking)?;
            drop(leaking);
            sp.difference_with(&z)?;
            drop(z);
            if sp.is_empty() {
                self.log(|| MecEvent::NoNewEc { vertex: v });
                continue;
            }
            if !sp.contains_unmetered(v) {
                return Err(Error::Invariant(format!(
                    "incremental step for {v} left an end-component without {v}"
                )));
            }
            let ec = scc_containing(p, &sp, v)?;
            drop(sp);
            self.collapse(p, &ec)?;
            m.union_with(&ec)?;
        }
        Ok(())
    }
}

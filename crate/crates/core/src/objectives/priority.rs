use crate::error::{Error, Result};
use crate::symbolic::{Universe, VertexId, VertexSet};

/// Per-vertex priorities in `0..=2d` with the threshold sets
/// `P≥i = { v | p(v) ≥ i }` for `1 ≤ i ≤ 2d`.
#[derive(Debug)]
pub struct PriorityMap {
    priority: Vec<u32>,
    d: u32,
    at_least: Vec<VertexSet>,
}

impl PriorityMap {
    /// `d` is the smallest value with every priority at most `2d`.
    pub fn new(universe: &Universe, priority: Vec<u32>) -> Result<Self> {
        if priority.len() != universe.size() {
            return Err(Error::Validation(format!(
                "{} priorities for {} vertices",
                priority.len(),
                universe.size()
            )));
        }
        let top = priority.iter().copied().max().unwrap_or(0);
        let d = top.div_ceil(2);
        let at_least = (1..=2 * d)
            .map(|i| {
                universe.from_ids(
                    priority
                        .iter()
                        .enumerate()
                        .filter(|&(_, &p)| p >= i)
                        .map(|(v, _)| VertexId(v as u32)),
                )
            })
            .collect::<Result<_>>()?;
        Ok(PriorityMap { priority, d, at_least })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn priority(&self, v: VertexId) -> u32 {
        self.priority[v.index()]
    }

    pub fn priorities(&self) -> &[u32] {
        &self.priority
    }

    /// `P≥i` for `1 ≤ i ≤ 2d`; `None` outside that range, where it is
    /// everything (`i = 0`) or nothing (`i > 2d`).
    pub fn at_least(&self, i: u32) -> Option<&VertexSet> {
        match i {
            0 => None,
            i => self.at_least.get(i as usize - 1),
        }
    }

    /// `P≤i` restricted to `within`.
    pub(crate) fn at_most_in(&self, i: u32, within: &VertexSet) -> Result<VertexSet> {
        match self.at_least(i + 1) {
            Some(ge) => within.difference(ge),
            None => Ok(within.copy()),
        }
    }

    /// `P_i` restricted to `within`.
    pub(crate) fn exactly_in(&self, i: u32, within: &VertexSet) -> Result<VertexSet> {
        if i > 2 * self.d {
            return Ok(within.universe().empty());
        }
        let mut s = match self.at_least(i) {
            Some(ge) => within.intersect(ge)?,
            None => within.copy(),
        };
        if let Some(above) = self.at_least(i + 1) {
            s.difference_with(above)?;
        }
        Ok(s)
    }
}

/// Smallest priority in `m`, by binary search over the thresholds: one
/// subset test per step.
pub fn min_priority(m: &VertexSet, pm: &PriorityMap) -> Result<u32> {
    if m.is_empty() {
        return Err(Error::contract("minimum priority of an empty set"));
    }
    let (mut lo, mut hi) = (0, 2 * pm.d);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if m.is_subset(&pm.at_least[mid as usize - 1])? {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Backend;

    #[test]
    fn binary_search_finds_the_minimum() {
        let u = Universe::new(6, Backend::BitVector);
        let pm = PriorityMap::new(&u, vec![3, 5, 0, 6, 6, 1]).unwrap();
        assert_eq!(pm.d(), 3);
        let set = |ids: &[u32]| u.from_ids(ids.iter().map(|&v| VertexId(v))).unwrap();
        assert_eq!(min_priority(&set(&[0, 1, 2]), &pm).unwrap(), 0);
        assert_eq!(min_priority(&set(&[3, 4]), &pm).unwrap(), 6);
        assert_eq!(min_priority(&set(&[0, 1]), &pm).unwrap(), 3);
        assert_eq!(min_priority(&set(&[5, 3]), &pm).unwrap(), 1);
        assert!(min_priority(&u.empty(), &pm).is_err());
    }

    #[test]
    fn thresholds_are_nested() {
        let u = Universe::new(5, Backend::Sparse);
        let pm = PriorityMap::new(&u, vec![0, 1, 2, 3, 4]).unwrap();
        for i in 1..4 {
            assert!(pm.at_least(i + 1).unwrap().is_subset(pm.at_least(i).unwrap()).unwrap());
        }
        let all = u.full();
        assert_eq!(pm.exactly_in(2, &all).unwrap().members(), vec![VertexId(2)]);
        assert_eq!(
            pm.at_most_in(1, &all).unwrap().members(),
            vec![VertexId(0), VertexId(1)]
        );
        assert_eq!(pm.at_most_in(4, &all).unwrap().len_unmetered(), 5);
    }
}

use std::cell::Cell;
use std::fmt;
use std::rc::Rc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::meter::{AllocEvent, Meter, OpKind, ResourceMeter};
use crate::error::{Error, Result};

/// Index of a vertex in `[0, n)`. Ids are stable: collapsing removes vertices
/// from the live universe but never renumbers the survivors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Storage used for vertex sets. Both backends produce content-identical
/// results; the meter counts the same operations for either.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// One fixed-width bit vector per set.
    #[default]
    BitVector,
    /// Sorted vectors of member ids.
    Sparse,
}

struct UniverseInner {
    n: usize,
    backend: Backend,
    meter: Meter,
    verify: Cell<bool>,
}

/// A vertex universe `[0, n)` together with its metering context. Every set
/// and relation created from (or derived from) a universe reports to its meter.
///
/// Cloning a `Universe` is cheap and shares the meter.
#[derive(Clone)]
pub struct Universe(Rc<UniverseInner>);

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Universe")
            .field("n", &self.0.n)
            .field("backend", &self.0.backend)
            .finish()
    }
}

impl Universe {
    pub fn new(n: usize, backend: Backend) -> Self {
        assert!(n <= u32::MAX as usize, "universe too large");
        Universe(Rc::new(UniverseInner {
            n,
            backend,
            meter: Meter::default(),
            verify: Cell::new(false),
        }))
    }

    pub fn size(&self) -> usize {
        self.0.n
    }

    pub fn backend(&self) -> Backend {
        self.0.backend
    }

    pub fn meter_snapshot(&self) -> ResourceMeter {
        self.0.meter.snapshot()
    }

    pub fn meter_reset(&self) {
        self.0.meter.reset()
    }

    /// Starts recording every set allocation and release.
    pub fn start_alloc_trace(&self) {
        self.0.meter.start_trace()
    }

    pub fn take_alloc_trace(&self) -> Vec<AllocEvent> {
        self.0.meter.take_trace()
    }

    /// Verification mode turns on expensive (metered) precondition checks,
    /// such as validating that a set is an end-component before collapsing it.
    pub fn set_verification(&self, on: bool) {
        self.0.verify.set(on)
    }

    pub fn verification(&self) -> bool {
        self.0.verify.get()
    }

    pub(crate) fn meter(&self) -> &Meter {
        &self.0.meter
    }

    pub(crate) fn op(&self, kind: OpKind) {
        self.0.meter.op(kind)
    }

    pub(crate) fn check(&self, other: &Universe) -> Result<()> {
        if Rc::ptr_eq(&self.0, &other.0) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch {
                left: self.0.n,
                right: other.0.n,
            })
        }
    }

    pub(crate) fn check_id(&self, v: VertexId) -> Result<()> {
        if v.index() < self.0.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                id: v.index(),
                n: self.0.n,
            })
        }
    }

    pub(crate) fn wrap(&self, repr: SetRepr) -> VertexSet {
        self.0.meter.alloc();
        VertexSet {
            universe: self.clone(),
            repr,
        }
    }

    pub fn empty(&self) -> VertexSet {
        self.wrap(SetRepr::empty(self.0.backend, self.0.n))
    }

    pub fn full(&self) -> VertexSet {
        self.wrap(SetRepr::full(self.0.backend, self.0.n))
    }

    pub fn singleton(&self, v: VertexId) -> Result<VertexSet> {
        self.check_id(v)?;
        Ok(self.wrap(SetRepr::from_ids(self.0.backend, self.0.n, [v.0])))
    }

    /// Builds a set from explicit ids. This is input construction, not a
    /// symbolic operation, so it is not counted as one.
    pub fn from_ids<I>(&self, ids: I) -> Result<VertexSet>
    where
        I: IntoIterator<Item = VertexId>,
    {
        let mut raw = Vec::new();
        for v in ids {
            self.check_id(v)?;
            raw.push(v.0);
        }
        Ok(self.wrap(SetRepr::from_ids(self.0.backend, self.0.n, raw)))
    }
}

#[derive(Debug, Clone)]
pub(crate) enum SetRepr {
    Dense(FixedBitSet),
    Sparse(Vec<u32>),
}

pub(crate) enum SetIter<'a> {
    Dense(fixedbitset::Ones<'a>),
    Sparse(std::iter::Copied<std::slice::Iter<'a, u32>>),
}

impl Iterator for SetIter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        match self {
            SetIter::Dense(it) => it.next().map(|i| i as u32),
            SetIter::Sparse(it) => it.next(),
        }
    }
}

pub(crate) fn merge_union_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub(crate) fn merge_filter_sorted(a: &[u32], b: &[u32], keep_common: bool) -> Vec<u32> {
    let mut out = Vec::new();
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        let common = j < b.len() && b[j] == x;
        if common == keep_common {
            out.push(x);
        }
    }
    out
}

impl SetRepr {
    pub(crate) fn empty(backend: Backend, n: usize) -> Self {
        match backend {
            Backend::BitVector => SetRepr::Dense(FixedBitSet::with_capacity(n)),
            Backend::Sparse => SetRepr::Sparse(Vec::new()),
        }
    }

    pub(crate) fn full(backend: Backend, n: usize) -> Self {
        match backend {
            Backend::BitVector => {
                let mut b = FixedBitSet::with_capacity(n);
                b.insert_range(..);
                SetRepr::Dense(b)
            }
            Backend::Sparse => SetRepr::Sparse((0..n as u32).collect()),
        }
    }

    pub(crate) fn from_ids<I: IntoIterator<Item = u32>>(backend: Backend, n: usize, ids: I) -> Self {
        match backend {
            Backend::BitVector => {
                let mut b = FixedBitSet::with_capacity(n);
                for v in ids {
                    b.insert(v as usize);
                }
                SetRepr::Dense(b)
            }
            Backend::Sparse => {
                let mut v: Vec<u32> = ids.into_iter().collect();
                v.sort_unstable();
                v.dedup();
                SetRepr::Sparse(v)
            }
        }
    }

    pub(crate) fn iter(&self) -> SetIter<'_> {
        match self {
            SetRepr::Dense(b) => SetIter::Dense(b.ones()),
            SetRepr::Sparse(v) => SetIter::Sparse(v.iter().copied()),
        }
    }

    pub(crate) fn contains(&self, v: u32) -> bool {
        match self {
            SetRepr::Dense(b) => b.contains(v as usize),
            SetRepr::Sparse(s) => s.binary_search(&v).is_ok(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        match self {
            SetRepr::Dense(b) => b.count_ones(..),
            SetRepr::Sparse(s) => s.len(),
        }
    }

    pub(crate) fn is_empty(&self) -> bool {
        match self {
            SetRepr::Dense(b) => b.is_clear(),
            SetRepr::Sparse(s) => s.is_empty(),
        }
    }

    pub(crate) fn min(&self) -> Option<u32> {
        match self {
            SetRepr::Dense(b) => b.minimum().map(|i| i as u32),
            SetRepr::Sparse(s) => s.first().copied(),
        }
    }

    pub(crate) fn union(&self, other: &SetRepr) -> SetRepr {
        match (self, other) {
            (SetRepr::Dense(a), SetRepr::Dense(b)) => {
                let mut r = a.clone();
                r.union_with(b);
                SetRepr::Dense(r)
            }
            (SetRepr::Sparse(a), SetRepr::Sparse(b)) => SetRepr::Sparse(merge_union_sorted(a, b)),
            _ => unreachable!("mixed set backends within one universe"),
        }
    }

    pub(crate) fn intersect(&self, other: &SetRepr) -> SetRepr {
        match (self, other) {
            (SetRepr::Dense(a), SetRepr::Dense(b)) => {
                let mut r = a.clone();
                r.intersect_with(b);
                SetRepr::Dense(r)
            }
            (SetRepr::Sparse(a), SetRepr::Sparse(b)) => SetRepr::Sparse(merge_filter_sorted(a, b, true)),
            _ => unreachable!("mixed set backends within one universe"),
        }
    }

    pub(crate) fn difference(&self, other: &SetRepr) -> SetRepr {
        match (self, other) {
            (SetRepr::Dense(a), SetRepr::Dense(b)) => {
                let mut r = a.clone();
                r.difference_with(b);
                SetRepr::Dense(r)
            }
            (SetRepr::Sparse(a), SetRepr::Sparse(b)) => SetRepr::Sparse(merge_filter_sorted(a, b, false)),
            _ => unreachable!("mixed set backends within one universe"),
        }
    }

    pub(crate) fn is_subset(&self, other: &SetRepr) -> bool {
        match (self, other) {
            (SetRepr::Dense(a), SetRepr::Dense(b)) => a.is_subset(b),
            (SetRepr::Sparse(a), SetRepr::Sparse(b)) => merge_filter_sorted(a, b, false).is_empty(),
            _ => unreachable!("mixed set backends within one universe"),
        }
    }

    pub(crate) fn same_members(&self, other: &SetRepr) -> bool {
        match (self, other) {
            (SetRepr::Dense(a), SetRepr::Dense(b)) => a == b,
            (SetRepr::Sparse(a), SetRepr::Sparse(b)) => a == b,
            _ => unreachable!("mixed set backends within one universe"),
        }
    }

    pub(crate) fn is_disjoint(&self, other: &SetRepr) -> bool {
        match (self, other) {
            (SetRepr::Dense(a), SetRepr::Dense(b)) => a.is_disjoint(b),
            (SetRepr::Sparse(a), SetRepr::Sparse(b)) => merge_filter_sorted(a, b, true).is_empty(),
            _ => unreachable!("mixed set backends within one universe"),
        }
    }
}

/// Opaque handle to a set of vertices, manipulated through metered symbolic
/// operations. The set counts as live until it is dropped.
pub struct VertexSet {
    universe: Universe,
    pub(crate) repr: SetRepr,
}

impl Drop for VertexSet {
    fn drop(&mut self) {
        self.universe.meter().free();
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.repr.iter()).finish()
    }
}

impl VertexSet {
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// A new live set with the same members. Assignment, not an operation.
    pub fn copy(&self) -> VertexSet {
        self.universe.wrap(self.repr.clone())
    }

    fn binary(&self, other: &VertexSet, f: impl FnOnce(&SetRepr, &SetRepr) -> SetRepr) -> Result<VertexSet> {
        self.universe.check(&other.universe)?;
        self.universe.op(OpKind::BasicSet);
        Ok(self.universe.wrap(f(&self.repr, &other.repr)))
    }

    fn assign(&mut self, other: &VertexSet, f: impl FnOnce(&SetRepr, &SetRepr) -> SetRepr) -> Result<()> {
        self.universe.check(&other.universe)?;
        self.universe.op(OpKind::BasicSet);
        self.repr = f(&self.repr, &other.repr);
        Ok(())
    }

    pub fn union(&self, other: &VertexSet) -> Result<VertexSet> {
        self.binary(other, SetRepr::union)
    }

    pub fn intersect(&self, other: &VertexSet) -> Result<VertexSet> {
        self.binary(other, SetRepr::intersect)
    }

    pub fn difference(&self, other: &VertexSet) -> Result<VertexSet> {
        self.binary(other, SetRepr::difference)
    }

    /// `self ← self ∪ other`; one basic set operation, no new live set.
    pub fn union_with(&mut self, other: &VertexSet) -> Result<()> {
        self.assign(other, SetRepr::union)
    }

    pub fn intersect_with(&mut self, other: &VertexSet) -> Result<()> {
        self.assign(other, SetRepr::intersect)
    }

    pub fn difference_with(&mut self, other: &VertexSet) -> Result<()> {
        self.assign(other, SetRepr::difference)
    }

    pub fn is_subset(&self, other: &VertexSet) -> Result<bool> {
        self.universe.check(&other.universe)?;
        self.universe.op(OpKind::BasicSet);
        Ok(self.repr.is_subset(&other.repr))
    }

    pub fn equals(&self, other: &VertexSet) -> Result<bool> {
        self.universe.check(&other.universe)?;
        self.universe.op(OpKind::BasicSet);
        Ok(self.repr.same_members(&other.repr))
    }

    /// Equality with the empty set; one basic set operation.
    pub fn is_empty(&self) -> bool {
        self.universe.op(OpKind::BasicSet);
        self.repr.is_empty()
    }

    /// `self ∩ other = ∅`, computed as one intersection followed by an
    /// emptiness test (two basic set operations).
    pub fn is_disjoint(&self, other: &VertexSet) -> Result<bool> {
        self.universe.check(&other.universe)?;
        self.universe.op(OpKind::BasicSet);
        self.universe.op(OpKind::BasicSet);
        Ok(self.repr.is_disjoint(&other.repr))
    }

    /// Returns the member with the smallest id.
    pub fn pick(&self) -> Result<VertexId> {
        self.universe.op(OpKind::Pick);
        self.repr.min().map(VertexId).ok_or(Error::EmptyPick)
    }

    pub fn cardinality(&self) -> usize {
        self.universe.op(OpKind::Cardinality);
        self.repr.len()
    }

    /// Cartesian product `self × other`, as an edge relation.
    pub fn product(&self, other: &VertexSet) -> Result<super::EdgeRelation> {
        self.universe.check(&other.universe)?;
        self.universe.op(OpKind::BasicSet);
        Ok(super::EdgeRelation::product_of(
            &self.universe,
            self.repr.clone(),
            other.repr.clone(),
        ))
    }

    /// Explicit member list in increasing order. This reads the set outside
    /// the symbolic model (for output and verification) and is not metered.
    pub fn members(&self) -> Vec<VertexId> {
        self.repr.iter().map(VertexId).collect()
    }

    /// Unmetered membership test, for output and verification.
    pub fn contains_unmetered(&self, v: VertexId) -> bool {
        v.index() < self.universe.size() && self.repr.contains(v.0)
    }

    /// Unmetered size, for reports and verification.
    pub fn len_unmetered(&self) -> usize {
        self.repr.len()
    }
}

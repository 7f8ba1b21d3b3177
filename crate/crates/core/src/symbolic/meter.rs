//! Resource accounting for the set-based symbolic model.
//!
//! Time is the number of symbolic operations, broken out by kind. Space is the
//! number of sets held simultaneously; every [`VertexSet`](super::VertexSet)
//! and [`EdgeRelation`](super::EdgeRelation) is one unit from creation until it
//! is dropped.

use std::cell::{Cell, RefCell};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OpKind {
    Pre,
    Post,
    BasicSet,
    Pick,
    Cardinality,
}

/// Snapshot of the counters of one metering context.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ResourceMeter {
    pub pre: u64,
    pub post: u64,
    pub basic_set: u64,
    pub pick: u64,
    pub cardinality: u64,
    pub live_sets: u64,
    pub peak_live_sets: u64,
}

impl ResourceMeter {
    pub fn count(&self, kind: OpKind) -> u64 {
        match kind {
            OpKind::Pre => self.pre,
            OpKind::Post => self.post,
            OpKind::BasicSet => self.basic_set,
            OpKind::Pick => self.pick,
            OpKind::Cardinality => self.cardinality,
        }
    }

    /// All symbolic operations, including pick and cardinality.
    pub fn total_ops(&self) -> u64 {
        self.pre + self.post + self.basic_set + self.pick + self.cardinality
    }

    /// Pre, post and basic set operations only.
    pub fn core_ops(&self) -> u64 {
        self.pre + self.post + self.basic_set
    }

    /// Counter-wise difference `self - earlier`; live counters are taken from `self`.
    pub fn since(&self, earlier: &ResourceMeter) -> ResourceMeter {
        ResourceMeter {
            pre: self.pre - earlier.pre,
            post: self.post - earlier.post,
            basic_set: self.basic_set - earlier.basic_set,
            pick: self.pick - earlier.pick,
            cardinality: self.cardinality - earlier.cardinality,
            live_sets: self.live_sets,
            peak_live_sets: self.peak_live_sets,
        }
    }
}

/// One change of the live-set counter, recorded when tracing is enabled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocEvent {
    Alloc,
    Free,
}

#[derive(Debug, Default)]
pub(crate) struct Meter {
    pre: Cell<u64>,
    post: Cell<u64>,
    basic_set: Cell<u64>,
    pick: Cell<u64>,
    cardinality: Cell<u64>,
    live: Cell<u64>,
    peak: Cell<u64>,
    trace: RefCell<Option<Vec<AllocEvent>>>,
}

impl Meter {
    pub(crate) fn op(&self, kind: OpKind) {
        let c = match kind {
            OpKind::Pre => &self.pre,
            OpKind::Post => &self.post,
            OpKind::BasicSet => &self.basic_set,
            OpKind::Pick => &self.pick,
            OpKind::Cardinality => &self.cardinality,
        };
        c.set(c.get() + 1);
    }

    pub(crate) fn alloc(&self) {
        let live = self.live.get() + 1;
        self.live.set(live);
        if live > self.peak.get() {
            self.peak.set(live);
        }
        if let Some(t) = self.trace.borrow_mut().as_mut() {
            t.push(AllocEvent::Alloc);
        }
    }

    pub(crate) fn free(&self) {
        self.live.set(self.live.get() - 1);
        if let Some(t) = self.trace.borrow_mut().as_mut() {
            t.push(AllocEvent::Free);
        }
    }

    pub(crate) fn snapshot(&self) -> ResourceMeter {
        ResourceMeter {
            pre: self.pre.get(),
            post: self.post.get(),
            basic_set: self.basic_set.get(),
            pick: self.pick.get(),
            cardinality: self.cardinality.get(),
            live_sets: self.live.get(),
            peak_live_sets: self.peak.get(),
        }
    }

    /// Zeroes the operation counters and restarts the peak from the current
    /// live count (sets that are still alive keep counting).
    pub(crate) fn reset(&self) {
        self.pre.set(0);
        self.post.set(0);
        self.basic_set.set(0);
        self.pick.set(0);
        self.cardinality.set(0);
        self.peak.set(self.live.get());
    }

    pub(crate) fn start_trace(&self) {
        *self.trace.borrow_mut() = Some(Vec::new());
    }

    pub(crate) fn take_trace(&self) -> Vec<AllocEvent> {
        self.trace.borrow_mut().take().unwrap_or_default()
    }
}

//! The set-based symbolic model of computation.
//!
//! An MDP is accessed only through opaque vertex sets and edge relations.
//! Every access is one of the metered operations: predecessor/successor
//! images, basic set operations (`∪ ∩ ∖ ⊆ = ×`), `pick`, and cardinality.
//! Space is the number of sets alive at the same time.

mod mdp;
mod meter;
mod relation;
mod set;

pub use mdp::SymbolicMdp;
pub use meter::{AllocEvent, OpKind, ResourceMeter};
pub use relation::EdgeRelation;
pub use set::{Backend, Universe, VertexId, VertexSet};

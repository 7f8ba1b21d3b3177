//! Maximal end-component decomposition.

mod classical;
mod collapse;
mod decomposition;
mod symmec;

pub use classical::{classical_mec, classical_mec_stream};
pub use collapse::{collapse_ec, rout, CollapseMap};
pub use decomposition::{
    default_gamma, gamma_for_epsilon, mec_decomposition, mec_stream, symbolic_mec, symbolic_mec_stream, MecAlgorithm,
    MecDecomposition, MecStats,
};
pub use symmec::{sym_mec, MecEvent, SymMec};

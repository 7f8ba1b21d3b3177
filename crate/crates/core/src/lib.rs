pub mod bench;
pub mod error;
pub mod explicit;
pub mod generate;
pub mod graph;
pub mod io;
pub mod mec;
pub mod objectives;
pub mod report;
pub mod symbolic;

pub use error::{Error, Result};

//! Exact computation toolkit for set-intersection representations of small
//! graphs: L-intersection numbers by backtracking search, minimum ranks over
//! finite fields, inclusion and t-intersection matrices, and a harness that
//! checks rank/intersection-number inequalities over exhaustive corpora.

pub mod error;
pub mod graph;
pub mod linalg;
pub mod minrank;
pub mod sets;
pub mod theta;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{BipartiteGraph, Graph};
pub use linalg::{ExactMatrix, Field};
pub use sets::SetFamily;
pub use theta::LSpec;

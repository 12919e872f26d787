//! Exact combinatorics of correspondence functors over finite lattices.
//!
//! Relations, posets and lattices are index-based; all arithmetic is over
//! big integers. See the workspace README for an overview.

pub mod catalog;
pub mod error;
pub mod forest;
pub mod functor;
pub mod lattice;
pub mod linalg;
pub mod maps;
pub mod module;
pub mod par;
pub mod poset;
pub mod quotients;
pub mod relation;
pub mod total;

pub use error::{Error, Result};

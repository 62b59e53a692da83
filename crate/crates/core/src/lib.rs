//! Exact desk-scale laboratory for weighted Turán problems on digraphs:
//! transitive-tournament blow-ups, weighted extremal numbers with witness
//! certificates, partition structure and stability sweeps, labelled censuses,
//! and MCMC sampling of H-free graphs.

pub mod budget;
pub mod canon;
pub mod census;
pub mod containment;
pub mod digraph;
pub mod error;
pub mod extremal;
pub mod sampler;
pub mod structure;
pub mod verify;
pub mod weight;

pub use budget::Budget;
pub use digraph::{Digraph, GraphKind};
pub use error::{Error, Result};
pub use weight::WeightParam;

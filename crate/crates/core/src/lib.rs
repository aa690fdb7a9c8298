//! Simulation of Floquet symmetry-protected topological order in the kicked
//! Ising chain, detected through symmetry-resolved entanglement.

pub mod analysis;
pub mod cohomology;
pub mod error;
pub mod fermion;
pub mod model;
pub mod runner;
pub mod statevector;

pub use error::{Error, Result};

//! Boolean Delta-Notch lateral-inhibition networks over arbitrary cell graphs.
//!
//! Every cell carries a Notch and a Delta variable. Delta is inhibited by Notch
//! in the same cell, Notch is activated when at least `k` neighbouring cells
//! show high Delta. The crate builds these networks (and the one-variable
//! reduced form obtained by eliminating Delta), and computes their stable
//! patterns, trap spaces, reachable patterns, basins of attraction and the
//! response of patterns to perturbations, using closed-form characterizations.
//!
//! Each closed-form routine has an exhaustive counterpart in
//! [`netcore::oracle`], which explores the explicit asynchronous state
//! transition graph and is used to cross-check the characterizations on
//! small instances.
//!
//! Cells and state positions are 0-based throughout the API. Text formats
//! (graph JSON, cell lists in reports) are 1-based.

pub mod cellgraph;
pub mod error;
pub mod netcore;
pub mod patterns;
pub mod reach;
pub mod robustness;
pub mod threshold;
pub mod trapspaces;

#[cfg(test)]
pub(crate) mod testutil;

pub use cellgraph::{CellGraph, CellSet, GraphKind};
pub use error::{Error, Result};
pub use netcore::{ModelKind, Network, NotchRule, PathWitness, State, Subspace, Transition};

//! Convex graph invariants.
//!
//! Graphs are dense symmetric adjacency matrices ([`graph::SymMatrix`]).
//! The crate provides exact combinatorial invariants, spectral and
//! semidefinite relaxations of them, invariant convex sets with projections,
//! and drivers for graph deconvolution, constrained generation, and
//! hypothesis testing built on those sets.

pub mod apps;
pub mod config;
pub mod error;
pub mod graph;
pub mod invariants;
pub mod linalg;
pub mod sdp;
pub mod sets;

pub use config::SolverConfig;
pub use error::{Error, Result};
pub use graph::{Graph, Permutation, RngStream, SymMatrix};

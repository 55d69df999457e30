//! Exact solvers, samplers and detection-error estimators for binary
//! sentiment networks under an Ising prior with external influence.
//!
//! Members hold spins `x_i ∈ {-1, +1}` drawn from
//! `p(x) ∝ exp(beta * sum_edges x_i x_j + h * sum_i x_i)` on one of seven
//! graph families. A pollster sees each spin through a binary symmetric
//! channel (optionally skipping members) and decides whether the average
//! sentiment exceeds a supermajority level `S`. This crate computes the
//! law of the average sentiment, the resulting error probability, its
//! Hoeffding bound and its large-n limits.

pub mod analytics;
pub mod detection;
pub mod engine;
pub mod error;
pub mod graph;
pub mod model;
pub mod numeric;
pub mod pmf;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{build_graph, edge_count, Boundary, GraphFamily, GraphInstance};
pub use model::{hamiltonian_weight, ModelParams, SpinConfiguration};
pub use pmf::MagnetizationPmf;

//! Partition functions, exact magnetization laws and samplers.

pub mod curie_weiss;
pub mod dp;
pub mod enumerate;
pub mod mcmc;
pub mod transfer;

pub use curie_weiss::magnetization_pmf_curie_weiss;
pub use dp::magnetization_pmf_dp;
pub use enumerate::{exact_enumeration, DensityOfStates, MAX_ENUMERATION_SPINS};
pub use mcmc::{mcmc_sample, sample_from_pmf, ChainSettings, SampleBatch, SamplerKind};
pub use transfer::{chain_ring_log_partition, ChainKind};

use crate::error::{Error, Result};
use crate::graph::{GraphFamily, GraphInstance};
use crate::model::ModelParams;
use crate::pmf::MagnetizationPmf;

/// `(1/n) log Z_n`.
pub fn finite_n_free_entropy(log_partition: f64, n: usize) -> f64 {
    log_partition / n as f64
}

/// Whether `exact_pmf` can handle `g` without enumerating.
pub fn has_polynomial_solver(family: GraphFamily) -> bool {
    family != GraphFamily::Lattice2D
}

/// Exact law of the spin sum using the cheapest exact route for the family.
/// Lattices are only available through enumeration.
pub fn exact_pmf(g: &GraphInstance, params: ModelParams) -> Result<MagnetizationPmf> {
    match g.family() {
        GraphFamily::Complete => magnetization_pmf_curie_weiss(params, g.n()),
        GraphFamily::Lattice2D => match exact_enumeration(g, params) {
            Err(Error::EnumerationTooLarge { .. }) => Err(Error::UnsupportedFamily(GraphFamily::Lattice2D)),
            other => other,
        },
        family => magnetization_pmf_dp(family, params, g.n()),
    }
}

/// Exact `log Z_n`; chains and rings go through the transfer matrix.
pub fn log_partition(g: &GraphInstance, params: ModelParams) -> Result<f64> {
    match g.family() {
        GraphFamily::Chain => chain_ring_log_partition(params, g.n(), ChainKind::Chain),
        GraphFamily::Ring => chain_ring_log_partition(params, g.n(), ChainKind::Ring),
        _ => exact_pmf(g, params).map(|p| p.log_partition()),
    }
}

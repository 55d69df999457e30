//! Brute-force state sweep over all free spins.
//!
//! The sweep visits configurations in Gray-code order and tallies exact
//! integer multiplicities of `(bond sum, plus count)`. Weights are applied
//! afterwards, so one sweep serves any `(beta, h)`.

use crate::error::{Error, Result};
use crate::graph::GraphInstance;
use crate::model::{log_weight_from_stats, ModelParams};
use crate::numeric::logsumexp;
use crate::pmf::MagnetizationPmf;

pub const MAX_ENUMERATION_SPINS: usize = 24;

/// Multiplicities of `(sum over edges of x_i x_j, number of +1 spins)`.
#[derive(Debug, Clone)]
pub struct DensityOfStates {
    n: usize,
    max_bond: i64,
    counts: Vec<u64>,
}

impl DensityOfStates {
    pub fn new(g: &GraphInstance) -> Result<Self> {
        let free = g.free_vertices();
        if free.len() > MAX_ENUMERATION_SPINS {
            return Err(Error::EnumerationTooLarge {
                max: MAX_ENUMERATION_SPINS,
                got: free.len(),
            });
        }
        let n = g.n();
        let adjacency = g.adjacency();
        let max_bond = if adjacency.is_some() { g.edge_count() as i64 } else { 0 };
        let width = n + 1;
        let mut counts = vec![0u64; (2 * max_bond as usize + 1) * width];

        let mut x: Vec<i8> = g.clamp_mask().iter().map(|c| c.unwrap_or(-1)).collect();
        let mut bond: i64 = match &adjacency {
            Some(_) => g.edges().map(|(u, v)| (x[u] * x[v]) as i64).sum(),
            None => 0,
        };
        let mut plus = x.iter().filter(|&&s| s > 0).count();

        let mut record = |bond: i64, plus: usize| {
            counts[(bond + max_bond) as usize * width + plus] += 1;
        };
        record(bond, plus);
        for step in 1u64..(1u64 << free.len()) {
            let v = free[step.trailing_zeros() as usize];
            if let Some(adj) = &adjacency {
                let local: i64 = adj.neighbors(v).iter().map(|&u| x[u] as i64).sum();
                bond -= 2 * x[v] as i64 * local;
            }
            x[v] = -x[v];
            if x[v] > 0 {
                plus += 1;
            } else {
                plus -= 1;
            }
            record(bond, plus);
        }
        Ok(Self { n, max_bond, counts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total_states(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Multiplicity of `(bond sum, plus count)`.
    pub fn count(&self, bond: i64, plus: usize) -> u64 {
        if bond.abs() > self.max_bond || plus > self.n {
            return 0;
        }
        self.counts[(bond + self.max_bond) as usize * (self.n + 1) + plus]
    }

    pub fn pmf(&self, g: &GraphInstance, params: ModelParams) -> Result<MagnetizationPmf> {
        let width = self.n + 1;
        let mut terms: Vec<Vec<f64>> = vec![Vec::new(); width];
        for (idx, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let bond = (idx / width) as i64 - self.max_bond;
            let plus = idx % width;
            let spin_sum = 2 * plus as i64 - self.n as i64;
            terms[plus].push((c as f64).ln() + log_weight_from_stats(g, params, bond, spin_sum));
        }
        MagnetizationPmf::from_log_weights(terms.iter().map(|t| logsumexp(t)).collect())
    }
}

/// Exact `log Z_n` and spin-sum law by visiting every free configuration.
pub fn exact_enumeration(g: &GraphInstance, params: ModelParams) -> Result<MagnetizationPmf> {
    DensityOfStates::new(g)?.pmf(g, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, Boundary, GraphFamily};

    fn params(beta: f64, h: f64) -> ModelParams {
        ModelParams::new(beta, h).unwrap()
    }

    #[test]
    fn single_free_spin() {
        let g = build_graph(GraphFamily::Empty, 1, Boundary::Free).unwrap();
        let pmf = exact_enumeration(&g, params(0.7, 0.0)).unwrap();
        assert!((pmf.log_partition() - 2f64.ln()).abs() < 1e-15);
        assert!((pmf.prob_of_sum(-1) - 0.5).abs() < 1e-15);
        assert!((pmf.prob_of_sum(1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hand_enumerated_partition_functions() {
        let chain = build_graph(GraphFamily::Chain, 2, Boundary::Free).unwrap();
        let z = exact_enumeration(&chain, params(0.5, 0.0)).unwrap().log_partition().exp();
        // 2e^{0.5} + 2e^{-0.5}
        assert!((z - 4.510_503_860_825_523).abs() < 1e-12, "{z}");
        let ring = build_graph(GraphFamily::Ring, 3, Boundary::Free).unwrap();
        let z = exact_enumeration(&ring, params(0.5, 0.0)).unwrap().log_partition().exp();
        // 2e^{1.5} + 6e^{-0.5}
        assert!((z - 12.602_562_098_951_93).abs() < 1e-11, "{z}");
    }

    #[test]
    fn state_count_and_limits() {
        let lat = build_graph(GraphFamily::Lattice2D, 16, Boundary::Free).unwrap();
        assert_eq!(DensityOfStates::new(&lat).unwrap().total_states(), 1 << 16);
        let clamped = build_graph(GraphFamily::Lattice2D, 16, Boundary::MinusClamped).unwrap();
        let dos = DensityOfStates::new(&clamped).unwrap();
        assert_eq!(dos.total_states(), 1 << 4);
        assert_eq!(dos.count(24, 0), 1);
        let big = build_graph(GraphFamily::Chain, 25, Boundary::Free).unwrap();
        assert_eq!(
            exact_enumeration(&big, params(0.1, 0.0)).unwrap_err(),
            Error::EnumerationTooLarge { max: 24, got: 25 }
        );
    }

    #[test]
    fn clamped_lattice_support_respects_clamp() {
        let g = build_graph(GraphFamily::Lattice2D, 16, Boundary::PlusClamped).unwrap();
        let pmf = exact_enumeration(&g, params(0.4, 0.0)).unwrap();
        // 12 spins are frozen at +1, so at least 12 plus spins.
        assert!(pmf.probs()[..12].iter().all(|&p| p == 0.0));
        assert!(pmf.mean_xbar() > 0.5);
    }
}

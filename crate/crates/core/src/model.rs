//! Ising prior parameters and spin configurations.
//!
//! Each edge contributes `beta * x_i * x_j` once, so the log-weight of a
//! configuration on a sparse graph is `beta * sum_edges x_i x_j + h * sum x_i`.
//! The literal `beta * x^T A x` form (which counts every edge twice) is
//! recovered by passing `2 * beta`. The complete graph uses the mean-field
//! scaling `beta / (2n) * (sum x)^2 + h * sum x`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphInstance;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Connection strength (inverse temperature), `>= 0`.
    pub beta: f64,
    /// External influence.
    pub h: f64,
}

impl ModelParams {
    pub fn new(beta: f64, h: f64) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::InvalidParameter(format!("beta must be finite and >= 0, got {beta}")));
        }
        if !h.is_finite() {
            return Err(Error::InvalidParameter(format!("h must be finite, got {h}")));
        }
        Ok(Self { beta, h })
    }

    pub fn with_h(self, h: f64) -> Self {
        Self { h, ..self }
    }

    /// Tag naming the coupling convention used throughout.
    pub const fn convention() -> &'static str {
        "per-edge-once"
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinConfiguration(Vec<i8>);

impl SpinConfiguration {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidSpin);
        }
        Ok(Self(spins))
    }

    /// `plus` leading +1 spins followed by -1 spins.
    pub fn with_plus_count(n: usize, plus: usize) -> Self {
        assert!(plus <= n);
        Self((0..n).map(|i| if i < plus { 1 } else { -1 }).collect())
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().map(|&s| s as i64).sum()
    }

    pub fn plus_count(&self) -> usize {
        self.0.iter().filter(|&&s| s > 0).count()
    }

    pub fn xbar(&self) -> f64 {
        self.sum() as f64 / self.0.len() as f64
    }
}

/// Log-weight from the integer sufficient statistics `(sum over edges of
/// x_i x_j, sum of spins)`. Evaluating from integers keeps enumeration exact.
pub(crate) fn log_weight_from_stats(
    g: &GraphInstance,
    params: ModelParams,
    bond_sum: i64,
    spin_sum: i64,
) -> f64 {
    let s = spin_sum as f64;
    if g.is_complete() {
        params.beta * s * s / (2.0 * g.n() as f64) + params.h * s
    } else {
        params.beta * bond_sum as f64 + params.h * s
    }
}

/// Log of the unnormalized prior weight of `x`.
pub fn hamiltonian_weight(g: &GraphInstance, params: ModelParams, x: &SpinConfiguration) -> Result<f64> {
    if x.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: x.len(),
        });
    }
    for (v, clamp) in g.clamp_mask().into_iter().enumerate() {
        if clamp.is_some_and(|c| c != x.0[v]) {
            return Err(Error::ClampViolated(v));
        }
    }
    let bonds: i64 = if g.is_complete() {
        0
    } else {
        g.edges().map(|(u, v)| (x.0[u] * x.0[v]) as i64).sum()
    };
    Ok(log_weight_from_stats(g, params, bonds, x.sum()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, Boundary, GraphFamily};

    fn cfg(s: &[i8]) -> SpinConfiguration {
        SpinConfiguration::new(s.to_vec()).unwrap()
    }

    #[test]
    fn weight_examples() {
        let chain = build_graph(GraphFamily::Chain, 2, Boundary::Free).unwrap();
        let p = ModelParams::new(0.5, 0.0).unwrap();
        assert_eq!(hamiltonian_weight(&chain, p, &cfg(&[1, 1])).unwrap(), 0.5);
        let p = ModelParams::new(0.5, 0.3).unwrap();
        assert_eq!(hamiltonian_weight(&chain, p, &cfg(&[1, -1])).unwrap(), -0.5);
        let ring = build_graph(GraphFamily::Ring, 3, Boundary::Free).unwrap();
        let p = ModelParams::new(0.5, 0.0).unwrap();
        assert_eq!(hamiltonian_weight(&ring, p, &cfg(&[1, 1, 1])).unwrap(), 1.5);
    }

    #[test]
    fn complete_graph_uses_mean_field_scaling() {
        let k = build_graph(GraphFamily::Complete, 4, Boundary::Free).unwrap();
        let p = ModelParams::new(1.0, 0.25).unwrap();
        // s = 2: 1 * 4 / 8 + 0.25 * 2
        assert_eq!(hamiltonian_weight(&k, p, &cfg(&[1, 1, 1, -1])).unwrap(), 1.0);
    }

    #[test]
    fn weight_errors() {
        let chain = build_graph(GraphFamily::Chain, 3, Boundary::Free).unwrap();
        let p = ModelParams::new(0.5, 0.0).unwrap();
        assert_eq!(
            hamiltonian_weight(&chain, p, &cfg(&[1, 1])),
            Err(Error::LengthMismatch { expected: 3, got: 2 })
        );
        let lat = build_graph(GraphFamily::Lattice2D, 9, Boundary::PlusClamped).unwrap();
        let mut spins = vec![1i8; 9];
        spins[0] = -1;
        assert_eq!(hamiltonian_weight(&lat, p, &cfg(&spins)), Err(Error::ClampViolated(0)));
        assert_eq!(SpinConfiguration::new(vec![0]), Err(Error::InvalidSpin));
        assert!(ModelParams::new(-0.1, 0.0).is_err());
    }
}

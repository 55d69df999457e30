use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::numeric::LnFactorials;
use crate::pmf::MagnetizationPmf;

/// Exact law of `S_n` under the mean-field prior
/// `P(S_n = s) ∝ C(n, (n+s)/2) exp(beta s^2 / (2n) + h s)`. O(n).
pub fn magnetization_pmf_curie_weiss(params: ModelParams, n: usize) -> Result<MagnetizationPmf> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let lf = LnFactorials::new(n);
    let nf = n as f64;
    let weights = (0..=n)
        .map(|k| {
            let s = (2 * k as i64 - n as i64) as f64;
            lf.ln_choose(n, k) + params.beta * s * s / (2.0 * nf) + params.h * s
        })
        .collect();
    MagnetizationPmf::from_log_weights(weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_spin_ignores_beta() {
        for beta in [0.0, 0.5, 3.0] {
            let pmf = magnetization_pmf_curie_weiss(ModelParams::new(beta, 0.0).unwrap(), 1).unwrap();
            assert!((pmf.prob_of_sum(1) - 0.5).abs() < 1e-15);
            assert!((pmf.prob_of_sum(-1) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn supercritical_pmf_is_bimodal() {
        let pmf = magnetization_pmf_curie_weiss(ModelParams::new(2.0, 0.0).unwrap(), 5001).unwrap();
        let modes = pmf.modes(0.5);
        assert_eq!(modes.len(), 2);
        // Root of mu = tanh(2 mu).
        for m in modes {
            assert!((m.abs() - 0.957_504_024_9).abs() < 0.01);
        }
    }
}

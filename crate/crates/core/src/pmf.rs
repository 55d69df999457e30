use crate::error::{Error, Result};
use crate::numeric::logsumexp;

/// Exact law of the spin sum `S_n`, indexed by the number `k` of +1 spins
/// (`S_n = 2k - n`), together with `log Z_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnetizationPmf {
    n: usize,
    probs: Vec<f64>,
    log_partition: f64,
}

impl MagnetizationPmf {
    /// Normalizes unnormalized log-weights (index = plus count) with one
    /// log-sum-exp.
    pub fn from_log_weights(log_weights: Vec<f64>) -> Result<Self> {
        if log_weights.is_empty() {
            return Err(Error::InvalidParameter("empty weight vector".into()));
        }
        let n = log_weights.len() - 1;
        let log_partition = logsumexp(&log_weights);
        if !log_partition.is_finite() {
            return Err(Error::Numeric(format!("log partition is {log_partition}")));
        }
        let mut probs: Vec<f64> = log_weights.iter().map(|&w| (w - log_partition).exp()).collect();
        // Remove the last-ulp drift of the normalization.
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        Ok(Self {
            n,
            probs,
            log_partition,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `P(plus count = k)` for `k = 0..=n`.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn log_partition(&self) -> f64 {
        self.log_partition
    }

    /// `(1/n) log Z_n`.
    pub fn free_entropy(&self) -> f64 {
        self.log_partition / self.n as f64
    }

    pub fn sum_at(&self, k: usize) -> i64 {
        2 * k as i64 - self.n as i64
    }

    pub fn xbar_at(&self, k: usize) -> f64 {
        self.sum_at(k) as f64 / self.n as f64
    }

    /// Probability of spin sum `s`; zero off the parity lattice.
    pub fn prob_of_sum(&self, s: i64) -> f64 {
        let twice_k = s + self.n as i64;
        if twice_k < 0 || twice_k % 2 != 0 || twice_k / 2 > self.n as i64 {
            return 0.0;
        }
        self.probs[(twice_k / 2) as usize]
    }

    pub fn expect(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(k, &p)| p * f(self.xbar_at(k)))
            .sum()
    }

    pub fn mean_xbar(&self) -> f64 {
        self.expect(|x| x)
    }

    pub fn var_xbar(&self) -> f64 {
        let m = self.mean_xbar();
        self.expect(|x| (x - m) * (x - m))
    }

    /// `(xbar, P(Xbar <= xbar))` over the support.
    pub fn cdf(&self) -> Vec<(f64, f64)> {
        let mut acc = 0.0;
        self.probs
            .iter()
            .enumerate()
            .map(|(k, &p)| {
                acc += p;
                (self.xbar_at(k), acc.min(1.0))
            })
            .collect()
    }

    /// Smallest support point whose cdf reaches `q`.
    pub fn quantile(&self, q: f64) -> f64 {
        let mut acc = 0.0;
        for (k, &p) in self.probs.iter().enumerate() {
            acc += p;
            if acc >= q {
                return self.xbar_at(k);
            }
        }
        1.0
    }

    pub fn total_variation(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "pmfs over different n");
        0.5 * self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).sum::<f64>()
    }

    /// Law of `-S_n`.
    pub fn reflected(&self) -> Self {
        Self {
            n: self.n,
            probs: self.probs.iter().rev().copied().collect(),
            log_partition: self.log_partition,
        }
    }

    /// Local maxima of the pmf whose mass is at least `rel` times the global
    /// maximum, as `xbar` values in increasing order.
    pub fn modes(&self, rel: f64) -> Vec<f64> {
        let pmax = self.probs.iter().copied().fold(0.0, f64::max);
        let p = &self.probs;
        (0..=self.n)
            .filter(|&k| {
                let left = if k == 0 { -1.0 } else { p[k - 1] };
                let right = if k == self.n { -1.0 } else { p[k + 1] };
                p[k] >= rel * pmax && p[k] > left && p[k] >= right
            })
            .map(|k| self.xbar_at(k))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_weights_normalize() {
        // Fair coins, n = 2: weights C(2,k).
        let pmf = MagnetizationPmf::from_log_weights(vec![0.0, 2f64.ln(), 0.0]).unwrap();
        assert!((pmf.log_partition() - 4f64.ln()).abs() < 1e-15);
        assert_eq!(pmf.probs(), &[0.25, 0.5, 0.25]);
        assert_eq!(pmf.prob_of_sum(0), 0.5);
        assert_eq!(pmf.prob_of_sum(1), 0.0);
        assert_eq!(pmf.prob_of_sum(-2), 0.25);
        assert_eq!(pmf.mean_xbar(), 0.0);
        assert_eq!(pmf.var_xbar(), 0.5);
        assert_eq!(pmf.modes(0.5), vec![0.0]);
        assert_eq!(pmf.quantile(0.5), 0.0);
        assert_eq!(pmf.cdf().last().unwrap().1, 1.0);
    }

    #[test]
    fn reflection_and_distance() {
        let pmf = MagnetizationPmf::from_log_weights(vec![0.0, 1.0, 2.0]).unwrap();
        let r = pmf.reflected();
        assert_eq!(r.probs()[0], pmf.probs()[2]);
        assert!(pmf.total_variation(&pmf) == 0.0);
        assert!(pmf.total_variation(&r) > 0.0);
    }
}

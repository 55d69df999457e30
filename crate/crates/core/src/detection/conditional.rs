//! Error probability of the detector given the number of positive members.
//!
//! With full observation the count of `+1` reports is `B1 + B2` with
//! `B1 ~ Bin(k, 1 - p)` from the `k` positive members and
//! `B2 ~ Bin(n - k, p)` from the rest. The detector is a threshold on that
//! count, so each conditional error is one tail of the convolution, which
//! costs O(n) per `k` given prefix and suffix sums of the `B2` law.

use super::{detect, supermajority, DetectionTask};
use crate::analytics::detector_constants;
use crate::error::{Error, Result};
use crate::numeric::{binomial_pmf, q_function, LnFactorials};

/// Largest `n` accepted by the exact conditional error.
pub const MAX_EXACT_N: usize = 2001;

/// Exact conditional error for one `(n, task)`, reusable across `k`.
#[derive(Debug, Clone)]
pub struct ExactConditional {
    n: usize,
    task: DetectionTask,
    lf: LnFactorials,
    /// Smallest report count at which the detector says `+1`
    /// (`n + 1` if it never does).
    cut: usize,
}

impl ExactConditional {
    pub fn new(n: usize, task: DetectionTask) -> Result<Self> {
        if n > MAX_EXACT_N {
            return Err(Error::ExactTooLarge { max: MAX_EXACT_N, n });
        }
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if !task.channel.is_full() {
            return Err(Error::MethodSourceMismatch {
                method: "exact conditional error",
                reason: "needs full observation (delta = 1)",
            });
        }
        task.check_level(n)?;
        // The decision is monotone in the count; locate the switch by
        // evaluating the detector itself so float rounding matches.
        let cut = (0..=n)
            .find(|&j| detect((2 * j) as f64 / n as f64 - 1.0, &task) > 0)
            .unwrap_or(n + 1);
        Ok(Self {
            n,
            task,
            lf: LnFactorials::new(n),
            cut,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `P(detector != supermajority | k positive members)`.
    pub fn at(&self, k: usize) -> Result<f64> {
        let n = self.n;
        if k > n {
            return Err(Error::InvalidParameter(format!("plus count {k} exceeds n = {n}")));
        }
        let xbar = (2 * k) as f64 / n as f64 - 1.0;
        let truth = supermajority(xbar, self.task.level)?;
        let p = self.task.channel.p();
        let first = binomial_pmf(&self.lf, k, 1.0 - p);
        let second = binomial_pmf(&self.lf, n - k, p);
        let m = n - k;
        let cut = self.cut as i64;

        let total: f64 = if truth > 0 {
            // P(B1 + B2 < cut) = sum_a P(B1 = a) P(B2 <= cut - 1 - a)
            let mut cdf = Vec::with_capacity(m + 1);
            let mut acc = 0.0;
            for &q in &second {
                acc += q;
                cdf.push(acc);
            }
            first
                .iter()
                .enumerate()
                .map(|(a, &pa)| {
                    let r = cut - 1 - a as i64;
                    let tail = if r < 0 {
                        0.0
                    } else if r as usize >= m {
                        1.0
                    } else {
                        cdf[r as usize]
                    };
                    pa * tail
                })
                .sum()
        } else {
            // P(B1 + B2 >= cut) = sum_a P(B1 = a) P(B2 >= cut - a)
            let mut sf = vec![0.0; m + 2];
            for j in (0..=m).rev() {
                sf[j] = sf[j + 1] + second[j];
            }
            first
                .iter()
                .enumerate()
                .map(|(a, &pa)| {
                    let r = cut - a as i64;
                    let tail = if r <= 0 {
                        1.0
                    } else if r as usize > m {
                        0.0
                    } else {
                        sf[r as usize]
                    };
                    pa * tail
                })
                .sum()
        };
        Ok(total.clamp(0.0, 1.0))
    }

    /// Conditional errors for every `k` in `0..=n`.
    pub fn table(&self) -> Result<Vec<f64>> {
        (0..=self.n).map(|k| self.at(k)).collect()
    }
}

/// One-off exact conditional error.
pub fn conditional_error_exact(k: usize, n: usize, task: &DetectionTask) -> Result<f64> {
    ExactConditional::new(n, *task)?.at(k)
}

/// Gaussian approximation `Q(D_p sqrt(n) |xbar - S|)`.
pub fn conditional_error_gauss(k: usize, n: usize, task: &DetectionTask) -> Result<f64> {
    if !task.channel.is_full() {
        return Err(Error::MethodSourceMismatch {
            method: "gaussian conditional error",
            reason: "needs full observation (delta = 1)",
        });
    }
    if n == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 0 <= k <= n and n > 0, got k = {k}, n = {n}")));
    }
    let (_, d_p) = detector_constants(task.channel.p())?;
    let xbar = (2 * k) as f64 / n as f64 - 1.0;
    Ok(q_function(d_p * (n as f64).sqrt() * (xbar - task.level).abs()))
}

//! Log-domain helpers and the standard normal tail.

use std::f64::consts::{PI, SQRT_2};

pub fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|&x| (x - m).exp()).sum::<f64>().ln()
}

/// `log(exp(a) + exp(b))`.
pub fn logaddexp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Table of `ln k!` for `k = 0..=n`, built with compensated summation so the
/// absolute error stays near one ulp of the result.
#[derive(Debug, Clone)]
pub struct LnFactorials(Vec<f64>);

impl LnFactorials {
    pub fn new(n: usize) -> Self {
        let mut table = Vec::with_capacity(n + 1);
        table.push(0.0);
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for k in 1..=n {
            let y = (k as f64).ln() - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            table.push(sum);
        }
        Self(table)
    }

    pub fn ln_fact(&self, k: usize) -> f64 {
        self.0[k]
    }

    pub fn ln_choose(&self, n: usize, k: usize) -> f64 {
        debug_assert!(k <= n);
        self.0[n] - self.0[k] - self.0[n - k]
    }
}

/// Binomial(m, q) pmf over `0..=m`, evaluated in log space.
pub fn binomial_pmf(lf: &LnFactorials, m: usize, q: f64) -> Vec<f64> {
    let (lq, lr) = (q.ln(), (-q).ln_1p());
    (0..=m)
        .map(|j| {
            let mut lp = lf.ln_choose(m, j);
            if j > 0 {
                lp += j as f64 * lq;
            }
            if j < m {
                lp += (m - j) as f64 * lr;
            }
            lp.exp()
        })
        .collect()
}

const ASYMPTOTIC_CUTOFF: f64 = 8.0;

/// Standard normal upper tail `Q(x) = P(N(0,1) > x)`.
///
/// Uses `erfc` up to `x = 8` and the asymptotic series
/// `phi(x)/x * (1 - 1/x^2 + 3/x^4 - ...)` beyond it.
pub fn q_function(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x > ASYMPTOTIC_CUTOFF {
        q_tail_asymptotic(x)
    } else {
        0.5 * libm::erfc(x / SQRT_2)
    }
}

fn q_tail_asymptotic(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    let phi = (-0.5 * x * x).exp() / (2.0 * PI).sqrt();
    let inv2 = 1.0 / (x * x);
    let (mut term, mut series) = (1.0, 1.0);
    for k in 1..12 {
        let next = -term * (2 * k - 1) as f64 * inv2;
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        series += term;
    }
    phi / x * series
}

/// `arccot(x)` on the principal branch `(0, pi)` for `x >= 0`.
pub fn arccot(x: f64) -> f64 {
    if x == 0.0 {
        PI / 2.0
    } else {
        (1.0 / x).atan()
    }
}

/// Ordinary least-squares slope of `y` against `x`.
pub fn ols_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logsumexp_handles_large_and_empty() {
        assert_eq!(logsumexp(&[]), f64::NEG_INFINITY);
        let v = logsumexp(&[1000.0, 1000.0]);
        assert!((v - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert!((logaddexp(f64::NEG_INFINITY, 3.0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn ln_factorials_match_direct_products() {
        let lf = LnFactorials::new(30);
        assert!((lf.ln_fact(10) - 3_628_800f64.ln()).abs() < 1e-13);
        assert!((lf.ln_choose(30, 15) - 155_117_520f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn binomial_pmf_sums_to_one() {
        let lf = LnFactorials::new(50);
        let pmf = binomial_pmf(&lf, 50, 0.3);
        assert!((pmf.iter().sum::<f64>() - 1.0).abs() < 1e-13);
        let pmf = binomial_pmf(&lf, 3, 0.7);
        assert!((pmf[3] - 0.343).abs() < 1e-15);
    }

    #[test]
    fn q_function_reference_values() {
        assert!((q_function(0.0) - 0.5).abs() < 1e-16);
        // Q(1.959963984540054) = 0.025
        assert!((q_function(1.959963984540054) / 0.025 - 1.0).abs() < 1e-12);
        assert!((q_function(-1.0) - 0.841_344_746_068_542_9).abs() < 1e-14);
        // scipy.stats.norm.sf
        assert!((q_function(4.364357804719848) / 6.374_837_460_548_514e-6 - 1.0).abs() < 1e-12);
        assert!((q_function(8.0) / 6.220_960_574_271_74e-16 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn q_function_is_continuous_at_series_switch() {
        let below = 0.5 * libm::erfc(8.0 / SQRT_2);
        let above = q_tail_asymptotic(8.0);
        assert!((below / above - 1.0).abs() < 1e-6, "{below} vs {above}");
        assert!(q_function(30.0) > 0.0 && q_function(30.0) < 1e-190);
    }

    #[test]
    fn slope_of_line() {
        let pts: Vec<_> = (0..5).map(|i| (i as f64, 2.0 - 0.5 * i as f64)).collect();
        assert!((ols_slope(&pts).unwrap() + 0.5).abs() < 1e-14);
        assert!(ols_slope(&pts[..1]).is_none());
    }
}

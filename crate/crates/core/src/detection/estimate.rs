//! Estimators of the detection error probability.

use std::fmt;
use std::str::FromStr;

use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::conditional::{conditional_error_gauss, ExactConditional};
use super::{detect, supermajority, DetectionTask};
use crate::analytics::detector_constants;
use crate::engine::mcmc::{sample_from_pmf, SampleBatch};
use crate::error::{Error, Result};
use crate::numeric::q_function;
use crate::pmf::MagnetizationPmf;
use crate::rng;
use crate::stats::{mean_batch_stderr, mean_stderr};

pub const DEFAULT_TRIALS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Estimator {
    /// Exact sum over an exact magnetization law.
    #[serde(rename = "exact")]
    ExactSmallN,
    /// Exact conditional error averaged over a law or a sample.
    #[serde(rename = "rb-exact")]
    RbExact,
    /// Gaussian conditional error averaged over a law or a sample.
    #[serde(rename = "rb-gauss")]
    RbGauss,
    /// Simulated polls compared with the truth.
    #[serde(rename = "mc")]
    PlainMc,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::ExactSmallN => "exact",
            Estimator::RbExact => "rb-exact",
            Estimator::RbGauss => "rb-gauss",
            Estimator::PlainMc => "mc",
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Estimator::ExactSmallN),
            "rb-exact" => Ok(Estimator::RbExact),
            "rb-gauss" => Ok(Estimator::RbGauss),
            "mc" => Ok(Estimator::PlainMc),
            _ => Err(Error::InvalidParameter(format!("unknown estimator '{s}'"))),
        }
    }
}

/// Where the magnetization comes from.
#[derive(Debug, Clone, Copy)]
pub enum Source<'a> {
    Pmf(&'a MagnetizationPmf),
    Samples(&'a SampleBatch),
}

impl Source<'_> {
    pub fn n(&self) -> usize {
        match self {
            Source::Pmf(p) => p.n(),
            Source::Samples(b) => b.n,
        }
    }

    /// `E[f(k)]` over the source with its standard error (0 for a pmf).
    /// `f` is evaluated once per distinct plus count.
    fn average(&self, mut f: impl FnMut(usize) -> Result<f64>) -> Result<(f64, f64)> {
        match self {
            Source::Pmf(pmf) => {
                let mut total = 0.0;
                for (k, &w) in pmf.probs().iter().enumerate() {
                    if w > 0.0 {
                        total += w * f(k)?;
                    }
                }
                Ok((total, 0.0))
            }
            Source::Samples(batch) => {
                if batch.is_empty() {
                    return Err(Error::InvalidParameter("sample batch is empty".into()));
                }
                let mut cache = vec![None; batch.n + 1];
                let mut values = Vec::with_capacity(batch.len());
                for &k in &batch.plus_counts {
                    let v = match cache[k] {
                        Some(v) => v,
                        None => {
                            let v = f(k)?;
                            cache[k] = Some(v);
                            v
                        }
                    };
                    values.push(v);
                }
                Ok(spread(&values, batch.is_markov()))
            }
        }
    }
}

fn spread(values: &[f64], correlated: bool) -> (f64, f64) {
    if correlated {
        mean_batch_stderr(values)
    } else {
        mean_stderr(values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McSettings {
    pub trials: usize,
    pub seed: u64,
}

impl Default for McSettings {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub pe: f64,
    pub stderr: f64,
    pub method: Estimator,
    pub n: usize,
    /// `E[exp(-c n (xbar - S)^2)]` with `c = delta^2 C_p`.
    pub hoeffding_bound: Option<f64>,
    /// Standard error of the bound (0 for a pmf source).
    pub bound_stderr: f64,
    /// `E[Q(D_p sqrt(n) |xbar - S|)]`; full observation only.
    pub q_limit_value: Option<f64>,
}

fn mismatch(method: Estimator, reason: &'static str) -> Error {
    Error::MethodSourceMismatch {
        method: method.name(),
        reason,
    }
}

/// Estimate the detection error probability from `source`.
pub fn estimate_pe(source: Source<'_>, task: &DetectionTask, method: Estimator, mc: McSettings) -> Result<ErrorEstimate> {
    let n = source.n();
    task.check_level(n)?;
    let (c_p, d_p) = detector_constants(task.channel.p())?;
    let delta = task.channel.delta();
    let nf = n as f64;
    let xbar = |k: usize| (2 * k) as f64 / nf - 1.0;

    let (pe, stderr) = match method {
        Estimator::ExactSmallN | Estimator::RbExact => {
            if method == Estimator::ExactSmallN && matches!(source, Source::Samples(_)) {
                return Err(mismatch(method, "needs an exact magnetization law"));
            }
            let cond = ExactConditional::new(n, *task)?;
            source.average(|k| cond.at(k))?
        }
        Estimator::RbGauss => {
            if !task.channel.is_full() {
                return Err(mismatch(method, "needs full observation (delta = 1)"));
            }
            source.average(|k| conditional_error_gauss(k, n, task))?
        }
        Estimator::PlainMc => plain_mc(source, task, mc)?,
    };

    let c = delta * delta * c_p;
    let (bound, bound_stderr) = source.average(|k| Ok((-c * nf * (xbar(k) - task.level).powi(2)).exp()))?;
    let q_limit_value = if task.channel.is_full() {
        Some(source.average(|k| Ok(q_function(d_p * nf.sqrt() * (xbar(k) - task.level).abs())))?.0)
    } else {
        None
    };
    Ok(ErrorEstimate {
        pe,
        stderr,
        method,
        n,
        hoeffding_bound: Some(bound),
        bound_stderr,
        q_limit_value,
    })
}

/// Draw the poll total given `k` positive members out of `n`.
fn poll_sum<R: rand::Rng + ?Sized>(k: usize, n: usize, p: f64, delta: f64, r: &mut R) -> i64 {
    let draw = |m: usize, q: f64, r: &mut R| -> i64 {
        if m == 0 || q <= 0.0 {
            0
        } else if q >= 1.0 {
            m as i64
        } else {
            Binomial::new(m as u64, q).expect("valid binomial").sample(r) as i64
        }
    };
    let seen_plus = draw(k, delta, r);
    let seen_minus = draw(n - k, delta, r);
    let flip_plus = draw(seen_plus as usize, p, r);
    let flip_minus = draw(seen_minus as usize, p, r);
    (seen_plus - 2 * flip_plus) - (seen_minus - 2 * flip_minus)
}

/// Monte Carlo over polls. The detector only sees the poll total, so each
/// trial draws that total from its exact law given the plus count rather
/// than polling members one by one. Trial `i` uses its own stream.
fn plain_mc(source: Source<'_>, task: &DetectionTask, mc: McSettings) -> Result<(f64, f64)> {
    if mc.trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let drawn;
    let batch = match source {
        Source::Pmf(pmf) => {
            drawn = sample_from_pmf(pmf, mc.trials, mc.seed);
            &drawn
        }
        Source::Samples(b) => b,
    };
    if batch.is_empty() {
        return Err(Error::InvalidParameter("sample batch is empty".into()));
    }
    let n = batch.n;
    let (p, delta) = (task.channel.p(), task.channel.delta());
    let reps = mc.trials.div_ceil(batch.len());
    let channel_root = rng::derive_seed(mc.seed, rng::tags::CHANNEL);
    let mut per_record = Vec::with_capacity(batch.len());
    for (i, &k) in batch.plus_counts.iter().enumerate() {
        let truth = supermajority((2 * k) as f64 / n as f64 - 1.0, task.level)?;
        let mut errors = 0usize;
        for r in 0..reps {
            let mut stream = rng::stream(channel_root, (i * reps + r) as u64);
            let ybar = poll_sum(k, n, p, delta, &mut stream) as f64 / n as f64;
            if detect(ybar, task) != truth {
                errors += 1;
            }
        }
        per_record.push(errors as f64 / reps as f64);
    }
    Ok(spread(&per_record, batch.is_markov()))
}

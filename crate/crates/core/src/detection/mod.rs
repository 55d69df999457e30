//! Noisy polling of the network and the naive supermajority detector.
//!
//! Each polled member reports its spin through a binary symmetric channel
//! with crossover `p`; with observation fraction `delta < 1` a member is
//! skipped (reports 0) with probability `1 - delta`. The poll average
//! `ybar` always divides by the full `n`.

mod conditional;
mod estimate;
mod probe;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SpinConfiguration;

pub use conditional::{conditional_error_exact, conditional_error_gauss, ExactConditional, MAX_EXACT_N};
pub use estimate::{estimate_pe, ErrorEstimate, Estimator, McSettings, Source, DEFAULT_TRIALS};
pub use probe::{concentration_probe, log_rate_slope, ProbeResult, Window};

/// Tolerance for deciding that `n (1 + S) / 2` is an integer.
pub const LEVEL_INTEGER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    p: f64,
    delta: f64,
}

impl ChannelParams {
    pub fn new(p: f64, delta: f64) -> Result<Self> {
        if !(p > 0.0 && p < 0.5) {
            return Err(Error::InvalidParameter(format!("crossover p must lie in (0, 1/2), got {p}")));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidParameter(format!("delta must lie in (0, 1], got {delta}")));
        }
        Ok(Self { p, delta })
    }

    pub fn full(p: f64) -> Result<Self> {
        Self::new(p, 1.0)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn is_full(&self) -> bool {
        self.delta == 1.0
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdMode {
    /// `t = delta (1 - 2p) S`, matching the conditional mean of `ybar`.
    #[default]
    DeltaScaled,
    /// `t = (1 - 2p) S` regardless of `delta`.
    PaperLiteral,
}

impl ThresholdMode {
    pub fn name(self) -> &'static str {
        match self {
            ThresholdMode::DeltaScaled => "delta-scaled",
            ThresholdMode::PaperLiteral => "paper-literal",
        }
    }
}

impl fmt::Display for ThresholdMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ThresholdMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "delta-scaled" => Ok(ThresholdMode::DeltaScaled),
            "paper-literal" => Ok(ThresholdMode::PaperLiteral),
            _ => Err(Error::InvalidParameter(format!("unknown threshold mode '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionTask {
    pub level: f64,
    pub channel: ChannelParams,
    pub threshold_mode: ThresholdMode,
}

impl DetectionTask {
    pub fn new(level: f64, channel: ChannelParams, threshold_mode: ThresholdMode) -> Result<Self> {
        if !(level > -1.0 && level < 1.0) {
            return Err(Error::InvalidParameter(format!("level S must lie in (-1, 1), got {level}")));
        }
        Ok(Self {
            level,
            channel,
            threshold_mode,
        })
    }

    /// Detector threshold on `ybar`.
    pub fn threshold(&self) -> f64 {
        let base = (1.0 - 2.0 * self.channel.p) * self.level;
        match self.threshold_mode {
            ThresholdMode::DeltaScaled => self.channel.delta * base,
            ThresholdMode::PaperLiteral => base,
        }
    }

    /// Rejects sizes where `n (1 + S) / 2` is an integer, since a
    /// configuration could then sit exactly on the level.
    pub fn check_level(&self, n: usize) -> Result<()> {
        if level_is_integer(n, self.level) {
            Err(Error::IntegerLevel { n, level: self.level })
        } else {
            Ok(())
        }
    }
}

pub fn level_is_integer(n: usize, level: f64) -> bool {
    let x = n as f64 * (1.0 + level) / 2.0;
    (x - x.round()).abs() < LEVEL_INTEGER_TOL
}

/// Poll every member once. Entries are the reported spin, or 0 if skipped.
pub fn measure<R: Rng + ?Sized>(x: &SpinConfiguration, channel: ChannelParams, rng: &mut R) -> Vec<i8> {
    x.spins()
        .iter()
        .map(|&s| {
            if channel.delta < 1.0 && !rng.random_bool(channel.delta) {
                0
            } else if rng.random_bool(channel.p) {
                -s
            } else {
                s
            }
        })
        .collect()
}

/// `sign(xbar - S)`. A tie is an error: the level must not be attainable.
pub fn supermajority(xbar: f64, level: f64) -> Result<i8> {
    if xbar > level {
        Ok(1)
    } else if xbar < level {
        Ok(-1)
    } else {
        Err(Error::Tie { xbar })
    }
}

/// `sign(ybar - t)` with `sign(0) = +1`.
pub fn detect(ybar: f64, task: &DetectionTask) -> i8 {
    if ybar >= task.threshold() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use proptest::prelude::*;

    fn task(level: f64, p: f64, delta: f64, mode: ThresholdMode) -> DetectionTask {
        DetectionTask::new(level, ChannelParams::new(p, delta).unwrap(), mode).unwrap()
    }

    #[test]
    fn supermajority_examples() {
        assert_eq!(supermajority(0.5, 1.0 / 3.0), Ok(1));
        assert_eq!(supermajority(-0.2, 0.0), Ok(-1));
        assert_eq!(supermajority(0.4, 0.6), Ok(-1));
        assert!(matches!(supermajority(0.25, 0.25), Err(Error::Tie { .. })));
    }

    #[test]
    fn detect_examples() {
        assert_eq!(detect(0.2, &task(0.0, 0.3, 1.0, ThresholdMode::DeltaScaled)), 1);
        assert_eq!(detect(0.1, &task(0.5, 0.3, 1.0, ThresholdMode::DeltaScaled)), -1);
        let half = task(0.5, 0.3, 0.5, ThresholdMode::DeltaScaled);
        assert!((half.threshold() - 0.1).abs() < 1e-15);
        assert_eq!(detect(0.15, &half), 1);
        let literal = task(0.5, 0.3, 0.5, ThresholdMode::PaperLiteral);
        assert_eq!(detect(0.15, &literal), -1);
        // Ties go to +1.
        assert_eq!(detect(0.0, &task(0.0, 0.3, 1.0, ThresholdMode::DeltaScaled)), 1);
    }

    #[test]
    fn integer_levels_are_rejected() {
        let t = task(0.0, 0.3, 1.0, ThresholdMode::DeltaScaled);
        assert!(t.check_level(1).is_ok());
        assert!(t.check_level(1001).is_ok());
        assert_eq!(t.check_level(10), Err(Error::IntegerLevel { n: 10, level: 0.0 }));
        let third = task(1.0 / 3.0, 0.3, 1.0, ThresholdMode::DeltaScaled);
        assert!(third.check_level(501).is_err());
        assert!(third.check_level(500).is_ok());
    }

    #[test]
    fn parameter_ranges() {
        assert!(ChannelParams::new(0.0, 1.0).is_err());
        assert!(ChannelParams::new(0.5, 1.0).is_err());
        assert!(ChannelParams::new(0.3, 0.0).is_err());
        assert!(DetectionTask::new(1.0, ChannelParams::full(0.3).unwrap(), ThresholdMode::DeltaScaled).is_err());
        assert_eq!("paper-literal".parse::<ThresholdMode>(), Ok(ThresholdMode::PaperLiteral));
    }

    #[test]
    fn noiseless_full_poll_is_identity() {
        let x = SpinConfiguration::new(vec![1, -1, -1, 1, 1]).unwrap();
        let y = measure(&x, ChannelParams::full(1e-300).unwrap(), &mut rng::stream(1, 0));
        assert_eq!(y, x.spins());
    }

    fn mean_poll(x: &SpinConfiguration, channel: ChannelParams, reps: usize) -> f64 {
        let mut r = rng::stream(5, 0);
        let n = x.len() as f64;
        (0..reps)
            .map(|_| measure(x, channel, &mut r).iter().map(|&v| v as f64).sum::<f64>() / n)
            .sum::<f64>()
            / reps as f64
    }

    #[test]
    fn poll_average_has_scaled_conditional_mean() {
        let x = SpinConfiguration::with_plus_count(40, 30);
        let reps = 20_000;
        // Per-member variance is at most 1, so the mean's error is below
        // 1 / sqrt(40 * reps).
        let se = 1.0 / (40.0 * reps as f64).sqrt();
        let full = mean_poll(&x, ChannelParams::full(0.3).unwrap(), reps);
        assert!((full - 0.4 * x.xbar()).abs() < 4.0 * se);
        let half = mean_poll(&x, ChannelParams::new(0.3, 0.5).unwrap(), reps);
        assert!((half - 0.5 * 0.4 * x.xbar()).abs() < 4.0 * se);
    }

    proptest! {
        #[test]
        fn flipping_everything_preserves_the_error_indicator(
            spins in prop::collection::vec(prop::bool::ANY, 1..60),
            level in -0.95f64..0.95,
            p in 0.01f64..0.49,
            seed in any::<u64>(),
        ) {
            let x: Vec<i8> = spins.iter().map(|&b| if b { 1 } else { -1 }).collect();
            let n = x.len() as f64;
            let xbar = x.iter().map(|&v| v as f64).sum::<f64>() / n;
            prop_assume!(xbar != level);
            let cfg = SpinConfiguration::new(x).unwrap();
            let y = measure(&cfg, ChannelParams::full(p).unwrap(), &mut rng::stream(seed, 0));
            let ybar = y.iter().map(|&v| v as f64).sum::<f64>() / n;
            let t = task(level, p, 1.0, ThresholdMode::DeltaScaled);
            prop_assume!(ybar != t.threshold());
            let err = supermajority(xbar, level).unwrap() != detect(ybar, &t);
            let flipped = task(-level, p, 1.0, ThresholdMode::DeltaScaled);
            let err_flipped = supermajority(-xbar, -level).unwrap() != detect(-ybar, &flipped);
            prop_assert_eq!(err, err_flipped);
        }
    }
}

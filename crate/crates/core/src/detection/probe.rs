//! Probability that the magnetization sits near a level, and a log-rate fit
//! for how fast that probability decays with `n`.

use serde::{Deserialize, Serialize};

use super::estimate::Source;
use crate::error::{Error, Result};
use crate::numeric::ols_slope;
use crate::stats::{mean_batch_stderr, mean_stderr};

/// Guards window edges against rounding in `xbar - S`.
const EDGE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "width", rename_all = "kebab-case")]
pub enum Window {
    /// `sqrt(n) |xbar - S| <= B`
    Scaled(f64),
    /// `|xbar - S| <= b`
    Fixed(f64),
}

impl Window {
    fn half_width(self, n: usize) -> Result<f64> {
        let (w, r) = match self {
            Window::Scaled(b) => (b, b / (n as f64).sqrt()),
            Window::Fixed(b) => (b, b),
        };
        if w > 0.0 && w.is_finite() {
            Ok(r)
        } else {
            Err(Error::InvalidParameter(format!("window width must be positive, got {w}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub n: usize,
    pub probability: f64,
    pub stderr: f64,
}

/// Mass of the source inside the window around `level`.
pub fn concentration_probe(source: Source<'_>, level: f64, window: Window) -> Result<ProbeResult> {
    let n = source.n();
    let r = window.half_width(n)? + EDGE_SLACK;
    let inside = |k: usize| ((2 * k) as f64 / n as f64 - 1.0 - level).abs() <= r;
    if !(0..=n).any(inside) {
        return Err(Error::EmptyWindow);
    }
    let (probability, stderr) = match source {
        Source::Pmf(pmf) => (
            pmf.probs().iter().enumerate().filter(|(k, _)| inside(*k)).map(|(_, w)| w).sum(),
            0.0,
        ),
        Source::Samples(batch) => {
            let hits: Vec<f64> = batch.plus_counts.iter().map(|&k| f64::from(u8::from(inside(k)))).collect();
            if batch.is_markov() {
                mean_batch_stderr(&hits)
            } else {
                mean_stderr(&hits)
            }
        }
    };
    Ok(ProbeResult {
        n,
        probability: probability.min(1.0),
        stderr,
    })
}

/// Least-squares slope of `ln P` against `n`; a negative slope estimates
/// minus the exponential decay rate. Points with `P <= 0` are dropped.
pub fn log_rate_slope(points: &[(usize, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, p)| *p > 0.0)
        .map(|&(n, p)| (n as f64, p.ln()))
        .collect();
    ols_slope(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::mcmc::{mcmc_sample, ChainSettings, SamplerKind};
    use crate::engine::magnetization_pmf_dp;
    use crate::graph::{build_graph, Boundary, GraphFamily};
    use crate::model::ModelParams;

    fn empty(n: usize) -> crate::pmf::MagnetizationPmf {
        magnetization_pmf_dp(GraphFamily::Empty, ModelParams::new(0.0, 0.0).unwrap(), n).unwrap()
    }

    #[test]
    fn fixed_window_away_from_mean_decays() {
        let mut pts = Vec::new();
        for n in [101usize, 201, 401, 801] {
            let r = concentration_probe(Source::Pmf(&empty(n)), 0.5, Window::Fixed(0.1)).unwrap();
            // Hoeffding at distance 0.4 from the mean.
            assert!(r.probability <= 2.0 * (-(n as f64) * 0.16 / 2.0).exp());
            pts.push((n, r.probability));
        }
        assert!(pts.windows(2).all(|w| w[1].1 < w[0].1));
        assert!(log_rate_slope(&pts).unwrap() < 0.0);
    }

    #[test]
    fn scaled_window_tends_to_normal_mass() {
        let r = concentration_probe(Source::Pmf(&empty(2001)), 0.0, Window::Scaled(1.0)).unwrap();
        assert!((r.probability - 0.682_689_492_137_085_9).abs() < 0.02, "{}", r.probability);
    }

    #[test]
    fn frozen_lattice_probe_is_degenerate() {
        let g = build_graph(GraphFamily::Lattice2D, 4, Boundary::PlusClamped).unwrap();
        let batch = mcmc_sample(&g, ModelParams::new(0.5, 0.0).unwrap(), SamplerKind::Metropolis, ChainSettings::new(20, 1)).unwrap();
        let near = concentration_probe(Source::Samples(&batch), 0.95, Window::Fixed(0.1)).unwrap();
        let far = concentration_probe(Source::Samples(&batch), 0.0, Window::Fixed(0.1)).unwrap();
        assert_eq!((near.probability, far.probability), (1.0, 0.0));
    }

    #[test]
    fn bad_windows() {
        let pmf = empty(11);
        assert!(concentration_probe(Source::Pmf(&pmf), 0.0, Window::Fixed(0.0)).is_err());
        assert_eq!(
            concentration_probe(Source::Pmf(&pmf), 0.05, Window::Fixed(0.01)),
            Err(Error::EmptyWindow)
        );
    }
}

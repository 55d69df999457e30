//! Large-n closed forms: free entropy densities, asymptotic means, modes and
//! variances, and the limiting detection error they imply.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphFamily;
use crate::numeric::arccot;

/// Critical coupling of the square-lattice model, `ln(1 + sqrt 2) / 2`.
pub const LATTICE_BETA_C: f64 = 0.440_686_793_509_771_5;

/// Default tolerance for treating a level as equal to a mean or mode.
pub const LEVEL_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeanKind {
    UniqueMean,
    /// The law splits onto `±mu`; `mu` holds the positive mode.
    SymmetricModes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSummary {
    pub family: GraphFamily,
    pub beta: f64,
    pub h: f64,
    /// Free entropy density; `None` where no closed form is known.
    pub psi: Option<f64>,
    pub mean_kind: MeanKind,
    /// Mean, or the positive mode for `SymmetricModes`. `None` when unknown.
    pub mu: Option<f64>,
    /// Limit of `n Var[xbar]`, conditioned on the positive mode for
    /// `SymmetricModes`. `None` when unknown or not finite.
    pub sigma2: Option<f64>,
    pub regime: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeLimitKind {
    Zero,
    ArccotValue,
    HalfArccotValue,
    BoundedPositiveUnknown,
    /// The mean itself has no closed form, so the level cannot be placed.
    Unresolved,
}

impl fmt::Display for PeLimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PeLimitKind::Zero => "zero",
            PeLimitKind::ArccotValue => "arccot",
            PeLimitKind::HalfArccotValue => "half-arccot",
            PeLimitKind::BoundedPositiveUnknown => "bounded-positive-unknown",
            PeLimitKind::Unresolved => "unresolved",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeLimit {
    pub kind: PeLimitKind,
    pub value: Option<f64>,
}

impl PeLimit {
    fn bare(kind: PeLimitKind) -> Self {
        Self { kind, value: None }
    }

    /// The numeric limit where one is known: the arccot value, or 0.
    pub fn numeric(&self) -> Option<f64> {
        match self.kind {
            PeLimitKind::Zero => Some(0.0),
            PeLimitKind::ArccotValue | PeLimitKind::HalfArccotValue => self.value,
            _ => None,
        }
    }
}

fn check_crossover(p: f64) -> Result<()> {
    if p > 0.0 && p < 0.5 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("crossover p must lie in (0, 1/2), got {p}")))
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta >= 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("beta must be finite and nonnegative, got {beta}")))
    }
}

/// `(C_p, D_p) = ((1-2p)^2 / 2, (1-2p) / sqrt(4p(1-p)))`.
pub fn detector_constants(p: f64) -> Result<(f64, f64)> {
    check_crossover(p)?;
    let gap = 1.0 - 2.0 * p;
    Ok((0.5 * gap * gap, gap / (4.0 * p * (1.0 - p)).sqrt()))
}

/// Crossover of a fully observed channel that is no better than polling a
/// fraction `delta` through a channel with crossover `p`.
pub fn effective_crossover(p: f64, delta: f64) -> Result<f64> {
    check_crossover(p)?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1], got {delta}")));
    }
    let a = (1.0 - delta) * (1.0 - 2.0 * p);
    Ok((a + p) / (a + 1.0))
}

// Chain/Ring closed forms at coupling `beta` and field `f`.
fn chain_psi(beta: f64, f: f64) -> f64 {
    beta + (f.cosh() + (f.sinh().powi(2) + (-4.0 * beta).exp()).sqrt()).ln()
}

fn chain_mu(beta: f64, f: f64) -> f64 {
    f.sinh() / (f.sinh().powi(2) + (-4.0 * beta).exp()).sqrt()
}

fn chain_sigma2(beta: f64, f: f64) -> f64 {
    let e = (-4.0 * beta).exp();
    e * f.cosh() / (f.sinh().powi(2) + e).powf(1.5)
}

/// Closed-form summary for Empty, Star, Chain, Ring and Wheel.
pub fn table1_summary(family: GraphFamily, beta: f64, h: f64) -> Result<AsymptoticSummary> {
    check_beta(beta)?;
    let sign = if h < 0.0 { -1.0 } else { 1.0 };
    let a = h.abs();
    let (psi, mu, sigma2) = match family {
        GraphFamily::Empty => ((2.0 * h.cosh()).ln(), h.tanh(), 1.0 / h.cosh().powi(2)),
        GraphFamily::Chain | GraphFamily::Ring => (chain_psi(beta, h), chain_mu(beta, h), chain_sigma2(beta, h)),
        GraphFamily::Star => {
            let f = beta + a;
            ((2.0 * f.cosh()).ln(), sign * f.tanh(), 1.0 / f.cosh().powi(2))
        }
        GraphFamily::Wheel => {
            let f = beta + a;
            (chain_psi(beta, f), sign * chain_mu(beta, f), chain_sigma2(beta, f))
        }
        other => return Err(Error::UnsupportedFamily(other)),
    };
    let hub = matches!(family, GraphFamily::Star | GraphFamily::Wheel);
    let two_modes = hub && h == 0.0 && beta > 0.0;
    Ok(AsymptoticSummary {
        family,
        beta,
        h,
        psi: Some(psi),
        mean_kind: if two_modes { MeanKind::SymmetricModes } else { MeanKind::UniqueMean },
        mu: Some(mu),
        sigma2: Some(sigma2),
        regime: if two_modes { "hub-split" } else { "unique" }.to_string(),
    })
}

fn binary_entropy(q: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.ln() };
    term(q) + term(1.0 - q)
}

/// Mean-field variational objective `h mu + beta mu^2 / 2 + H((1 + mu) / 2)`.
pub fn curie_weiss_objective(beta: f64, h: f64, mu: f64) -> f64 {
    h * mu + 0.5 * beta * mu * mu + binary_entropy(0.5 * (1.0 + mu))
}

/// Root of `mu - tanh(beta mu + field)` on `[lo, 1]` for a bracket where the
/// residual is negative at `lo` and positive at 1.
fn bisect_fixed_point(beta: f64, field: f64, mut lo: f64) -> f64 {
    let resid = |m: f64| m - (beta * m + field).tanh();
    let mut hi = 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if resid(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Return whichever bracket end has the smaller residual.
    if resid(lo).abs() <= resid(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Mean-field (complete graph) summary from the variational formula.
pub fn curie_weiss_summary(beta: f64, h: f64) -> Result<AsymptoticSummary> {
    check_beta(beta)?;
    let (mu, kind, regime) = if h != 0.0 {
        // For h > 0 the residual is negative at 0 and convex on [0, 1], so
        // the positive root is unique and it is the global maximizer.
        let m = bisect_fixed_point(beta, h.abs(), 0.0);
        (m.copysign(h), MeanKind::UniqueMean, "field")
    } else if beta <= 1.0 {
        (0.0, MeanKind::UniqueMean, if beta == 1.0 { "critical" } else { "subcritical" })
    } else {
        let m = bisect_fixed_point(beta, 0.0, 1e-15);
        // Near beta = 1 the bracket end can sit at the origin; keep whichever
        // stationary point scores higher.
        let m = if curie_weiss_objective(beta, 0.0, m) >= curie_weiss_objective(beta, 0.0, 0.0) {
            m
        } else {
            0.0
        };
        let kind = if m > 0.0 { MeanKind::SymmetricModes } else { MeanKind::UniqueMean };
        (m, kind, "supercritical")
    };
    let denom = 1.0 - beta + beta * mu * mu;
    let sigma2 = if denom > 0.0 { Some((1.0 - mu * mu) / denom) } else { None };
    Ok(AsymptoticSummary {
        family: GraphFamily::Complete,
        beta,
        h,
        psi: Some(curie_weiss_objective(beta, h, mu)),
        mean_kind: kind,
        mu: Some(mu),
        sigma2,
        regime: regime.to_string(),
    })
}

/// Spontaneous magnetization `(1 - sinh(2 beta)^-4)^(1/8)` above the critical
/// coupling, 0 at or below it.
pub fn onsager_magnetization(beta: f64) -> f64 {
    if beta <= LATTICE_BETA_C {
        return 0.0;
    }
    let s = (2.0 * beta).sinh();
    (1.0 - s.powi(-4)).max(0.0).powf(0.125)
}

/// Square-lattice summary. Only the mean at `h = 0` is known in closed form.
pub fn lattice_summary(beta: f64, h: f64) -> Result<AsymptoticSummary> {
    check_beta(beta)?;
    let (kind, mu, regime) = if h != 0.0 {
        (MeanKind::UniqueMean, None, "field")
    } else if beta > LATTICE_BETA_C {
        (MeanKind::SymmetricModes, Some(onsager_magnetization(beta)), "supercritical")
    } else if beta == LATTICE_BETA_C {
        (MeanKind::UniqueMean, Some(0.0), "critical")
    } else {
        (MeanKind::UniqueMean, Some(0.0), "subcritical")
    };
    Ok(AsymptoticSummary {
        family: GraphFamily::Lattice2D,
        beta,
        h,
        psi: None,
        mean_kind: kind,
        mu,
        sigma2: None,
        regime: regime.to_string(),
    })
}

/// Dispatch to the summary for any family.
pub fn asymptotic_summary(family: GraphFamily, beta: f64, h: f64) -> Result<AsymptoticSummary> {
    match family {
        GraphFamily::Complete => curie_weiss_summary(beta, h),
        GraphFamily::Lattice2D => lattice_summary(beta, h),
        other => table1_summary(other, beta, h),
    }
}

/// Limit of the detection error as `n -> inf` at level `S`.
pub fn pe_limit(summary: &AsymptoticSummary, level: f64, p: f64) -> Result<PeLimit> {
    pe_limit_with_tolerance(summary, level, p, LEVEL_MATCH_TOL)
}

pub fn pe_limit_with_tolerance(summary: &AsymptoticSummary, level: f64, p: f64, tol: f64) -> Result<PeLimit> {
    let (_, d_p) = detector_constants(p)?;
    if !(level > -1.0 && level < 1.0) {
        return Err(Error::InvalidParameter(format!("level S must lie in (-1, 1), got {level}")));
    }
    let Some(mu) = summary.mu else {
        return Ok(PeLimit::bare(PeLimitKind::Unresolved));
    };
    let on_critical = match summary.mean_kind {
        MeanKind::UniqueMean => (level - mu).abs() <= tol,
        MeanKind::SymmetricModes => (level.abs() - mu).abs() <= tol,
    };
    if !on_critical {
        return Ok(PeLimit::bare(PeLimitKind::Zero));
    }
    if summary.family == GraphFamily::Lattice2D {
        return Ok(PeLimit::bare(PeLimitKind::BoundedPositiveUnknown));
    }
    // A missing variance here means the fluctuations are wider than sqrt(n)
    // (critical mean field), which drives the error to zero.
    let Some(sigma2) = summary.sigma2 else {
        return Ok(PeLimit::bare(PeLimitKind::Zero));
    };
    let base = arccot(d_p * sigma2.sqrt()) / PI;
    Ok(match summary.mean_kind {
        MeanKind::UniqueMean => PeLimit {
            kind: PeLimitKind::ArccotValue,
            value: Some(base),
        },
        MeanKind::SymmetricModes => PeLimit {
            kind: PeLimitKind::HalfArccotValue,
            value: Some(0.5 * base),
        },
    })
}

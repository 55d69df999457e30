//! Exact spin-sum laws for the Empty, Star, Chain, Ring and Wheel graphs.
//!
//! Path-like graphs run a forward pass over `(site, spin, plus count)`.
//! Layers are kept in rescaled linear arithmetic with the scale carried in a
//! log accumulator; entries below `FLUSH` relative to the layer maximum are
//! dropped, which bounds the active count window and avoids subnormals.
//! Star and Wheel condition on the hub.

use crate::error::{Error, Result};
use crate::graph::GraphFamily;
use crate::model::ModelParams;
use crate::numeric::{logaddexp, LnFactorials};
use crate::pmf::MagnetizationPmf;

const FLUSH: f64 = 1e-290;

/// Unnormalized log-weights over the plus count of a path of `len` sites
/// with uniform field `h`. With `pin = Some(s)` the first spin is fixed to
/// `s`; `close` additionally bonds the last site back to the first.
pub(crate) fn path_log_weights(len: usize, beta: f64, h: f64, pin: Option<i8>, close: bool) -> Vec<f64> {
    assert!(len >= 1);
    assert!(!close || pin.is_some(), "closing a path needs a pinned first spin");
    // Factor e^{|h|} out of every site and e^{beta} out of every bond.
    let node_up = (h - h.abs()).exp();
    let node_dn = (-h - h.abs()).exp();
    let anti = (-2.0 * beta).exp();

    let mut up = vec![0.0f64; len + 1];
    let mut dn = vec![0.0f64; len + 1];
    match pin {
        None => {
            up[1] = node_up;
            dn[0] = node_dn;
        }
        Some(s) if s > 0 => up[1] = node_up,
        Some(_) => dn[0] = node_dn,
    }
    let mut log_scale = h.abs();
    let (mut lo, mut hi) = (0usize, 1usize);

    for _ in 1..len {
        let mut peak = 0.0f64;
        // Descending so that up[c + 1] is overwritten only after it was read.
        for c in (lo..=hi).rev() {
            let (u, d) = (up[c], dn[c]);
            let nu = (u + d * anti) * node_up;
            let nd = (u * anti + d) * node_dn;
            up[c + 1] = nu;
            dn[c] = nd;
            peak = peak.max(nu).max(nd);
        }
        up[lo] = 0.0;
        hi += 1;
        log_scale += beta + h.abs();

        if peak == 0.0 {
            break;
        }
        let inv = 1.0 / peak;
        for c in lo..=hi {
            let (u, d) = (up[c] * inv, dn[c] * inv);
            up[c] = if u < FLUSH { 0.0 } else { u };
            dn[c] = if d < FLUSH { 0.0 } else { d };
        }
        log_scale += peak.ln();
        while lo < hi && up[lo] == 0.0 && dn[lo] == 0.0 {
            lo += 1;
        }
        while hi > lo && up[hi] == 0.0 && dn[hi] == 0.0 {
            hi -= 1;
        }
    }

    let (w_up, w_dn) = match (close, pin) {
        (true, Some(s)) if s > 0 => (1.0, anti),
        (true, Some(_)) => (anti, 1.0),
        _ => (1.0, 1.0),
    };
    if close {
        log_scale += beta;
    }
    (0..=len)
        .map(|c| {
            let w = up[c] * w_up + dn[c] * w_dn;
            if w > 0.0 {
                w.ln() + log_scale
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect()
}

fn ring_log_weights(len: usize, beta: f64, h: f64) -> Vec<f64> {
    let plus = path_log_weights(len, beta, h, Some(1), true);
    let minus = path_log_weights(len, beta, h, Some(-1), true);
    plus.iter().zip(&minus).map(|(&a, &b)| logaddexp(a, b)).collect()
}

fn empty_log_weights(n: usize, h: f64) -> Vec<f64> {
    let lf = LnFactorials::new(n);
    (0..=n)
        .map(|k| lf.ln_choose(n, k) + h * (2 * k as i64 - n as i64) as f64)
        .collect()
}

fn star_log_weights(n: usize, beta: f64, h: f64) -> Vec<f64> {
    let leaves = n - 1;
    let lf = LnFactorials::new(leaves);
    let mut out = vec![f64::NEG_INFINITY; n + 1];
    for hub in [-1.0f64, 1.0] {
        let field = h + hub * beta;
        let shift = usize::from(hub > 0.0);
        for j in 0..=leaves {
            let w = hub * h + lf.ln_choose(leaves, j) + field * (2 * j as i64 - leaves as i64) as f64;
            out[j + shift] = logaddexp(out[j + shift], w);
        }
    }
    out
}

fn wheel_log_weights(n: usize, beta: f64, h: f64) -> Vec<f64> {
    let rim = n - 1;
    let mut out = vec![f64::NEG_INFINITY; n + 1];
    for hub in [-1.0f64, 1.0] {
        let shift = usize::from(hub > 0.0);
        for (j, w) in ring_log_weights(rim, beta, h + hub * beta).into_iter().enumerate() {
            out[j + shift] = logaddexp(out[j + shift], w + hub * h);
        }
    }
    out
}

/// Exact law of the spin sum for the path-like and hub families.
pub fn magnetization_pmf_dp(family: GraphFamily, params: ModelParams, n: usize) -> Result<MagnetizationPmf> {
    if n < family.min_vertices() {
        return Err(Error::TooFewVertices {
            family,
            min: family.min_vertices(),
            n,
        });
    }
    let ModelParams { beta, h } = params;
    let weights = match family {
        GraphFamily::Empty => empty_log_weights(n, h),
        GraphFamily::Chain => path_log_weights(n, beta, h, None, false),
        GraphFamily::Ring => ring_log_weights(n, beta, h),
        GraphFamily::Star => star_log_weights(n, beta, h),
        GraphFamily::Wheel => wheel_log_weights(n, beta, h),
        other => return Err(Error::UnsupportedFamily(other)),
    };
    MagnetizationPmf::from_log_weights(weights)
}

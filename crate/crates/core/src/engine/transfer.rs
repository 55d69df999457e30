//! Finite-n partition functions of open and closed chains via the 2x2
//! transfer matrix `T(x, x') = exp(beta x x' + h (x + x') / 2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphFamily;
use crate::model::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainKind {
    Chain,
    Ring,
}

impl ChainKind {
    pub fn family(self) -> GraphFamily {
        match self {
            ChainKind::Chain => GraphFamily::Chain,
            ChainKind::Ring => GraphFamily::Ring,
        }
    }
}

/// Spectral data of `T`; eigenvalues are kept in log form.
#[derive(Debug, Clone, Copy)]
pub struct TransferSpectrum {
    /// `ln lambda_+`, which is the free entropy density of the infinite chain.
    pub ln_top: f64,
    /// `lambda_- / lambda_+`, in `[0, 1)`.
    pub ratio: f64,
    /// Unit eigenvector of `lambda_+`.
    pub top_vector: [f64; 2],
    /// Unit eigenvector of `lambda_-`.
    pub bottom_vector: [f64; 2],
}

impl TransferSpectrum {
    pub fn new(params: ModelParams) -> Self {
        let ModelParams { beta, h } = params;
        // T = e^beta * [[e^h, e^{-2beta}], [e^{-2beta}, e^{-h}]]
        let off = (-2.0 * beta).exp();
        let root = (h.sinh().powi(2) + off * off).sqrt();
        let top = h.cosh() + root;
        // det / lambda_+ avoids cancellation in the small eigenvalue.
        let bottom = (1.0 - off * off) / top;
        // (T - lambda_+ I) v = 0  =>  v = (lambda_+ - e^{-h}, e^{-2beta})
        let v = [top - (-h).exp(), off];
        let norm = v[0].hypot(v[1]);
        let top_vector = if norm > 0.0 { [v[0] / norm, v[1] / norm] } else { [1.0, 0.0] };
        Self {
            ln_top: beta + top.ln(),
            ratio: bottom / top,
            top_vector,
            bottom_vector: [-top_vector[1], top_vector[0]],
        }
    }
}

/// Exact `log Z_n` for the chain (`n >= 2`) or ring (`n >= 3`).
pub fn chain_ring_log_partition(params: ModelParams, n: usize, kind: ChainKind) -> Result<f64> {
    let min = kind.family().min_vertices();
    if n < min {
        return Err(Error::TooFewVertices {
            family: kind.family(),
            min,
            n,
        });
    }
    let spec = TransferSpectrum::new(params);
    let log_z = match kind {
        ChainKind::Ring => n as f64 * spec.ln_top + spec.ratio.powi(n as i32).ln_1p(),
        ChainKind::Chain => {
            // b(x) = exp(h x / 2); Z = b^T T^{n-1} b
            let b = [(params.h / 2.0).exp(), (-params.h / 2.0).exp()];
            let dot = |v: [f64; 2]| v[0] * b[0] + v[1] * b[1];
            let (pt, pb) = (dot(spec.top_vector), dot(spec.bottom_vector));
            (n - 1) as f64 * spec.ln_top + (pt * pt + spec.ratio.powi(n as i32 - 1) * pb * pb).ln()
        }
    };
    if log_z.is_finite() {
        Ok(log_z)
    } else {
        Err(Error::Numeric(format!("transfer-matrix log Z = {log_z}")))
    }
}

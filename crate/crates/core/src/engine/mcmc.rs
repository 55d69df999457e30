//! Markov chain samplers for graphs without an exact solver.
//!
//! A Metropolis sweep visits every free vertex once in index order. Each
//! visit proposes a uniformly drawn spin value (so the proposal is the
//! current value half of the time) and accepts with `min(1, exp(Δ))`.
//! Proposing the flip unconditionally would make the fixed-order sweep a
//! deterministic global flip at `beta = h = 0`.
//!
//! Wolff updates grow a cluster with bond probability `1 - exp(-2 beta)`.
//! A clamped vertex acts as a frozen ghost: if a bond to an aligned clamped
//! neighbour is activated, the cluster flip is rejected. During burn-in a
//! Wolff sweep runs cluster moves until `n_free` vertices have been touched.
//! Stopping on a state-dependent count biases the recorded states, so after
//! burn-in the number of moves per sweep is frozen at the value that the
//! mean burn-in cluster size implies.

use std::fmt;
use std::str::FromStr;

use rand::distr::{Distribution, Uniform};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Adjacency, GraphInstance};
use crate::model::ModelParams;
use crate::pmf::MagnetizationPmf;
use crate::rng::{self, StreamRng};

pub const DEFAULT_BURN_IN: usize = 1000;
pub const DEFAULT_THIN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    Metropolis,
    Wolff,
    /// Independent draws from an exact magnetization law.
    ExactPmf,
}

impl SamplerKind {
    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::Metropolis => "metropolis",
            SamplerKind::Wolff => "wolff",
            SamplerKind::ExactPmf => "exact-pmf",
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "metropolis" => Ok(SamplerKind::Metropolis),
            "wolff" => Ok(SamplerKind::Wolff),
            _ => Err(Error::InvalidParameter(format!("unknown sampler '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSettings {
    pub count: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
}

impl ChainSettings {
    pub fn new(count: usize, seed: u64) -> Self {
        Self {
            count,
            burn_in: DEFAULT_BURN_IN,
            thin: DEFAULT_THIN,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.count == 0 || self.burn_in == 0 || self.thin == 0 {
            return Err(Error::InvalidParameter(
                "count, burn-in and thin must all be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Recorded magnetizations of one chain (or one batch of exact draws).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub n: usize,
    pub magnetizations: Vec<f64>,
    pub plus_counts: Vec<usize>,
    pub seed: u64,
    pub sampler: SamplerKind,
    pub burn_in: usize,
    pub thin: usize,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.plus_counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus_counts.is_empty()
    }

    /// Whether consecutive records may be correlated.
    pub fn is_markov(&self) -> bool {
        self.sampler != SamplerKind::ExactPmf
    }

    /// `(xbar, empirical cdf)` at each distinct sampled value.
    pub fn empirical_cdf(&self) -> Vec<(f64, f64)> {
        let mut counts = vec![0usize; self.n + 1];
        for &k in &self.plus_counts {
            counts[k] += 1;
        }
        let total = self.len() as f64;
        let mut acc = 0usize;
        counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| {
                acc += c;
                ((2 * k as i64 - self.n as i64) as f64 / self.n as f64, acc as f64 / total)
            })
            .collect()
    }
}

enum Interaction {
    Sparse(Adjacency),
    MeanField,
}

struct Chain<'a> {
    params: ModelParams,
    n: usize,
    spins: Vec<i8>,
    sum: i64,
    clamped: Vec<bool>,
    free: Vec<usize>,
    interaction: Interaction,
    rng: &'a mut StreamRng,
    // Wolff scratch space.
    stamp: Vec<u32>,
    generation: u32,
    stack: Vec<usize>,
}

impl<'a> Chain<'a> {
    fn new(g: &GraphInstance, params: ModelParams, rng: &'a mut StreamRng) -> Self {
        let mask = g.clamp_mask();
        let any_clamp = mask.iter().any(Option::is_some);
        let spins: Vec<i8> = mask
            .iter()
            .map(|c| match c {
                Some(v) => *v,
                // Clamped lattices start aligned with their boundary.
                None if any_clamp => g.boundary().clamp_value().unwrap_or(1),
                None => {
                    if rng.random::<bool>() {
                        1
                    } else {
                        -1
                    }
                }
            })
            .collect();
        let interaction = match g.adjacency() {
            Some(adj) => Interaction::Sparse(adj),
            None => Interaction::MeanField,
        };
        Self {
            params,
            n: g.n(),
            sum: spins.iter().map(|&s| s as i64).sum(),
            clamped: mask.iter().map(Option::is_some).collect(),
            free: g.free_vertices(),
            spins,
            interaction,
            rng,
            stamp: vec![0; g.n()],
            generation: 0,
            stack: Vec::new(),
        }
    }

    fn plus_count(&self) -> usize {
        ((self.sum + self.n as i64) / 2) as usize
    }

    /// Change in log-weight from flipping `v`.
    fn flip_delta(&self, v: usize) -> f64 {
        let x = self.spins[v] as f64;
        match &self.interaction {
            Interaction::Sparse(adj) => {
                let local: i64 = adj.neighbors(v).iter().map(|&u| self.spins[u] as i64).sum();
                -2.0 * x * (self.params.beta * local as f64 + self.params.h)
            }
            Interaction::MeanField => {
                let s = self.sum as f64;
                let s_new = s - 2.0 * x;
                self.params.beta / (2.0 * self.n as f64) * (s_new * s_new - s * s) - 2.0 * self.params.h * x
            }
        }
    }

    fn metropolis_sweep(&mut self) {
        for idx in 0..self.free.len() {
            let v = self.free[idx];
            let draw: u64 = self.rng.random();
            if draw & 1 == 0 {
                continue;
            }
            let delta = self.flip_delta(v);
            let accept = delta >= 0.0 || {
                let u = (draw >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                u < delta.exp()
            };
            if accept {
                self.sum -= 2 * self.spins[v] as i64;
                self.spins[v] = -self.spins[v];
            }
        }
    }

    /// One cluster move; returns the number of vertices the cluster reached.
    fn wolff_move(&mut self, pick: &Uniform<usize>, p_add: f64) -> usize {
        let Self {
            spins,
            sum,
            clamped,
            free,
            interaction,
            rng,
            stamp,
            generation,
            stack,
            ..
        } = self;
        let Interaction::Sparse(adj) = interaction else {
            unreachable!("checked before sampling");
        };
        *generation = generation.wrapping_add(1);
        if *generation == 0 {
            stamp.fill(0);
            *generation = 1;
        }
        let gen = *generation;
        let seed = free[pick.sample(rng)];
        let color = spins[seed];
        stack.clear();
        stack.push(seed);
        stamp[seed] = gen;
        let mut members = vec![seed];
        let mut rejected = false;
        'grow: while let Some(v) = stack.pop() {
            for &u in adj.neighbors(v) {
                if spins[u] != color || stamp[u] == gen {
                    continue;
                }
                if rng.random::<f64>() >= p_add {
                    continue;
                }
                if clamped[u] {
                    rejected = true;
                    break 'grow;
                }
                stamp[u] = gen;
                stack.push(u);
                members.push(u);
            }
        }
        if !rejected {
            for &v in &members {
                spins[v] = -color;
            }
            *sum -= 2 * color as i64 * members.len() as i64;
        }
        members.len()
    }

    /// Burn-in sweep; returns `(moves, touched)`.
    fn wolff_adaptive_sweep(&mut self, pick: &Uniform<usize>, p_add: f64) -> (usize, usize) {
        let (mut moves, mut touched) = (0, 0);
        while touched < self.free.len() {
            touched += self.wolff_move(pick, p_add);
            moves += 1;
        }
        (moves, touched)
    }

    fn wolff_fixed_sweep(&mut self, pick: &Uniform<usize>, p_add: f64, moves: usize) {
        for _ in 0..moves {
            self.wolff_move(pick, p_add);
        }
    }
}

pub fn mcmc_sample(
    g: &GraphInstance,
    params: ModelParams,
    sampler: SamplerKind,
    settings: ChainSettings,
) -> Result<SampleBatch> {
    settings.validate()?;
    match sampler {
        SamplerKind::Wolff if params.h != 0.0 => return Err(Error::WolffNeedsZeroField(params.h)),
        SamplerKind::Wolff if g.is_complete() => return Err(Error::WolffOnCompleteGraph),
        SamplerKind::ExactPmf => {
            return Err(Error::InvalidParameter(
                "exact-pmf draws come from sample_from_pmf, not a chain".into(),
            ))
        }
        _ => {}
    }
    let mut rng = rng::stream(settings.seed, rng::tags::CHAIN);
    let mut chain = Chain::new(g, params, &mut rng);
    let p_add = -(-2.0 * params.beta).exp_m1();
    let pick = if chain.free.is_empty() {
        None
    } else {
        Some(Uniform::new(0, chain.free.len()).expect("nonempty range"))
    };
    let (mut total_moves, mut total_touched) = (0usize, 0usize);
    for _ in 0..settings.burn_in {
        match (&pick, sampler) {
            (None, _) => {}
            (Some(pick), SamplerKind::Wolff) => {
                let (m, t) = chain.wolff_adaptive_sweep(pick, p_add);
                total_moves += m;
                total_touched += t;
            }
            _ => chain.metropolis_sweep(),
        }
    }
    let moves_per_sweep = if total_touched == 0 {
        1
    } else {
        let mean_cluster = total_touched as f64 / total_moves as f64;
        ((chain.free.len() as f64 / mean_cluster).ceil() as usize).max(1)
    };
    let sweep = |chain: &mut Chain| match (&pick, sampler) {
        (None, _) => {}
        (Some(pick), SamplerKind::Wolff) => chain.wolff_fixed_sweep(pick, p_add, moves_per_sweep),
        _ => chain.metropolis_sweep(),
    };
    let mut plus_counts = Vec::with_capacity(settings.count);
    let mut magnetizations = Vec::with_capacity(settings.count);
    for _ in 0..settings.count {
        for _ in 0..settings.thin {
            sweep(&mut chain);
        }
        plus_counts.push(chain.plus_count());
        magnetizations.push(chain.sum as f64 / chain.n as f64);
    }
    Ok(SampleBatch {
        n: g.n(),
        magnetizations,
        plus_counts,
        seed: settings.seed,
        sampler,
        burn_in: settings.burn_in,
        thin: settings.thin,
    })
}

/// `count` independent draws of the plus count from an exact law.
pub fn sample_from_pmf(pmf: &MagnetizationPmf, count: usize, seed: u64) -> SampleBatch {
    let mut cdf = Vec::with_capacity(pmf.n() + 1);
    let mut acc = 0.0;
    for &p in pmf.probs() {
        acc += p;
        cdf.push(acc);
    }
    let mut rng = rng::stream(seed, rng::tags::PMF_DRAW);
    let plus_counts: Vec<usize> = (0..count)
        .map(|_| {
            let u: f64 = rng.random::<f64>() * acc;
            cdf.partition_point(|&c| c <= u).min(pmf.n())
        })
        .collect();
    SampleBatch {
        n: pmf.n(),
        magnetizations: plus_counts.iter().map(|&k| pmf.xbar_at(k)).collect(),
        plus_counts,
        seed,
        sampler: SamplerKind::ExactPmf,
        burn_in: 0,
        thin: 1,
    }
}

//! The six subcommands. Each one expands its config into sweep points, runs
//! the points on a worker pool with per-point seeds, and concatenates the
//! rows in sweep order.

use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use smd_core::analytics::{asymptotic_summary, pe_limit, LATTICE_BETA_C};
use smd_core::detection::{
    concentration_probe, estimate_pe, log_rate_slope, ChannelParams, DetectionTask, Estimator, McSettings, Source,
    DEFAULT_TRIALS, MAX_EXACT_N,
};
use smd_core::engine::{exact_pmf, mcmc_sample, ChainSettings, SampleBatch, SamplerKind};
use smd_core::rng::derive_seed;
use smd_core::{build_graph, Error as CoreError, GraphFamily, MagnetizationPmf, ModelParams};

use crate::args::Command;
use crate::config::{single, LevelSpec, RunConfig};
use crate::error::{config_err, CliError, CliResult};
use crate::output::{Cell, PointRecord, Report, RunManifest, Table};

/// Recorded chain samples when `--trials` is not given.
pub const DEFAULT_CHAIN_SAMPLES: usize = 10_000;

/// Slack for `pe <= bound`; both sides are float sums over the support.
pub const DOMINANCE_SLACK: f64 = 1e-12;

pub fn execute(cmd: Command, config: &RunConfig, workers: usize) -> CliResult<Report> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| config_err(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| match cmd {
        Command::Cdf => cmd_cdf(config),
        Command::PeVsN => cmd_pe_vs_n(config),
        Command::PeVsBeta => cmd_pe_vs_beta(config),
        Command::Asymptotics => cmd_asymptotics(config),
        Command::BoundsCheck => cmd_bounds_check(config),
        Command::ProbeConcentration => cmd_probe(config),
    })
}

/// Run `f` over the points in parallel, keeping input order. The first
/// failing point (in sweep order) decides the error.
fn par_points<I: Sync, O: Send>(items: &[I], f: impl Fn(usize, &I) -> CliResult<O> + Sync) -> CliResult<Vec<O>> {
    let results: Vec<CliResult<O>> = items.par_iter().enumerate().map(|(i, it)| f(i, it)).collect();
    results.into_iter().collect()
}

fn timed<T>(f: impl FnOnce() -> CliResult<T>) -> CliResult<(T, f64)> {
    let start = Instant::now();
    let v = f()?;
    Ok((v, start.elapsed().as_secs_f64()))
}

/// Exact law, or a chain on the lattice.
enum Law {
    Pmf(MagnetizationPmf),
    Chain(SampleBatch),
}

impl Law {
    fn source(&self) -> Source<'_> {
        match self {
            Law::Pmf(p) => Source::Pmf(p),
            Law::Chain(b) => Source::Samples(b),
        }
    }

    fn tag(&self) -> String {
        match self {
            Law::Pmf(_) => "exact-pmf".to_string(),
            Law::Chain(b) => format!("mcmc-{}", b.sampler),
        }
    }
}

fn default_sampler(h: f64) -> SamplerKind {
    if h == 0.0 {
        SamplerKind::Wolff
    } else {
        SamplerKind::Metropolis
    }
}

fn build_law(config: &RunConfig, family: GraphFamily, n: usize, params: ModelParams, seed: u64) -> CliResult<Law> {
    let g = build_graph(family, n, config.boundary)?;
    if family != GraphFamily::Lattice2D {
        return Ok(Law::Pmf(exact_pmf(&g, params)?));
    }
    let sampler = config.sampler.unwrap_or_else(|| default_sampler(params.h));
    let settings = ChainSettings {
        count: config.trials.unwrap_or(DEFAULT_CHAIN_SAMPLES),
        burn_in: config.burn_in,
        thin: config.thin,
        seed,
    };
    Ok(Law::Chain(mcmc_sample(&g, params, sampler, settings)?))
}

/// Numeric level; `mu` resolves to the asymptotic mean (the positive mode
/// when the law splits).
pub fn resolve_level(spec: LevelSpec, family: GraphFamily, beta: f64, h: f64) -> CliResult<f64> {
    let level = match spec {
        LevelSpec::Value(v) => v,
        LevelSpec::Mu => asymptotic_summary(family, beta, h)?.mu.ok_or_else(|| {
            config_err(format!("S=mu has no closed form for {family} at beta = {beta}, h = {h}"))
        })?,
    };
    if level > -1.0 && level < 1.0 {
        Ok(level)
    } else {
        Err(config_err(format!("level S must lie in (-1, 1), got {level}")))
    }
}

fn task_for(config: &RunConfig, level: f64, p: f64) -> CliResult<DetectionTask> {
    let channel = ChannelParams::new(p, config.delta)?;
    Ok(DetectionTask::new(level, channel, config.threshold_mode)?)
}

fn default_estimator(config: &RunConfig) -> Estimator {
    config.estimator.unwrap_or(if config.delta < 1.0 {
        Estimator::PlainMc
    } else {
        Estimator::RbExact
    })
}

fn mc_settings(config: &RunConfig, law: &Law, seed: u64) -> McSettings {
    let trials = match law {
        Law::Pmf(_) => config.trials.unwrap_or(DEFAULT_TRIALS),
        // One poll per recorded chain sample.
        Law::Chain(b) => b.len(),
    };
    McSettings { trials, seed }
}

fn key(parts: &[(&str, String)]) -> String {
    parts.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

pub fn cmd_cdf(config: &RunConfig) -> CliResult<Report> {
    let family = single(&config.graphs, "graph", "cdf")?;
    let n = single(&config.ns, "n", "cdf")?;
    let h = single(&config.hs, "h", "cdf")?;
    if family == GraphFamily::Lattice2D && matches!(config.estimator, Some(Estimator::ExactSmallN | Estimator::RbExact)) {
        return Err(CliError::Infeasible(
            "the lattice CDF is empirical; no exact magnetization law at this size".into(),
        ));
    }
    let points = par_points(&config.betas, |i, &beta| {
        let (law, secs) = timed(|| build_law(config, family, n, ModelParams::new(beta, h)?, derive_seed(config.seed, i as u64)))?;
        let cdf = match &law {
            Law::Pmf(p) => p.cdf(),
            Law::Chain(b) => b.empirical_cdf(),
        };
        let rec = PointRecord {
            key: key(&[("beta", beta.to_string())]),
            seconds: secs,
            method: law.tag(),
            note: None,
        };
        Ok((cdf, rec))
    })?;
    let mut table = Table::new(&["family", "n", "beta", "h", "boundary", "xbar", "cdf"]);
    let mut manifest = RunManifest::new(config.clone());
    for (&beta, (cdf, rec)) in config.betas.iter().zip(points) {
        for (xbar, c) in cdf {
            table.push(vec![
                family.name().into(),
                n.into(),
                beta.into(),
                h.into(),
                config.boundary.name().into(),
                xbar.into(),
                c.into(),
            ]);
        }
        manifest.points.push(rec);
    }
    Ok(Report { table, manifest })
}

pub fn cmd_pe_vs_n(config: &RunConfig) -> CliResult<Report> {
    let family = single(&config.graphs, "graph", "pe-vs-n")?;
    let h = single(&config.hs, "h", "pe-vs-n")?;
    let spec = single(&config.levels, "S", "pe-vs-n")?;
    let p = single(&config.ps, "p", "pe-vs-n")?;
    let requested = default_estimator(config);

    // Validate every point before running any of them.
    let mut cells = Vec::new();
    for &beta in &config.betas {
        let level = resolve_level(spec, family, beta, h)?;
        let task = task_for(config, level, p)?;
        let limit = if config.delta < 1.0 {
            None
        } else {
            Some(pe_limit(&asymptotic_summary(family, beta, h)?, level, p)?)
        };
        for &n in &config.ns {
            task.check_level(n)?;
            cells.push((beta, n, task, limit));
        }
    }

    let points = par_points(&cells, |i, &(beta, n, task, _)| {
        let seed = derive_seed(config.seed, i as u64);
        let (method, note) = match requested {
            Estimator::ExactSmallN | Estimator::RbExact if n > MAX_EXACT_N => (
                Estimator::RbGauss,
                Some(format!("n = {n} exceeds the exact cutoff {MAX_EXACT_N}; fell back to rb-gauss")),
            ),
            m => (m, None),
        };
        let ((est, tag), secs) = timed(|| {
            let law = build_law(config, family, n, ModelParams::new(beta, h)?, seed)?;
            let est = estimate_pe(law.source(), &task, method, mc_settings(config, &law, seed))?;
            Ok((est, law.tag()))
        })?;
        let rec = PointRecord {
            key: key(&[("beta", beta.to_string()), ("n", n.to_string())]),
            seconds: secs,
            method: format!("{} over {tag}", est.method),
            note,
        };
        Ok((est, rec))
    })?;

    let mut table = Table::new(&[
        "beta",
        "n",
        "pe",
        "stderr",
        "method",
        "hoeffding_bound",
        "q_limit_value",
        "pe_limit",
    ]);
    let mut manifest = RunManifest::new(config.clone());
    for (&(beta, n, task, limit), (est, rec)) in cells.iter().zip(points) {
        table.push(vec![
            beta.into(),
            n.into(),
            est.pe.into(),
            est.stderr.into(),
            est.method.name().into(),
            est.hoeffding_bound.into(),
            est.q_limit_value.into(),
            limit.and_then(|l| l.numeric()).into(),
        ]);
        if let Some(note) = &rec.note {
            manifest.notes.push(note.clone());
        }
        manifest.points.push(rec);
        if let Some(l) = limit {
            manifest.summary.insert(
                format!("pe_limit[beta={beta}]"),
                json!({ "kind": l.kind.to_string(), "value": l.value, "level": task.level }),
            );
        }
    }
    if config.delta < 1.0 {
        manifest.notes.push("pe_limit and q_limit_value are left empty under partial observation".into());
    }
    Ok(Report { table, manifest })
}

pub fn cmd_pe_vs_beta(config: &RunConfig) -> CliResult<Report> {
    let family = single(&config.graphs, "graph", "pe-vs-beta")?;
    if family != GraphFamily::Lattice2D {
        return Err(config_err(format!("pe-vs-beta scans the 2-D lattice, not {family}")));
    }
    let n = single(&config.ns, "n", "pe-vs-beta")?;
    let h = single(&config.hs, "h", "pe-vs-beta")?;
    let spec = single(&config.levels, "S", "pe-vs-beta")?;
    let p = single(&config.ps, "p", "pe-vs-beta")?;
    let method = config.estimator.unwrap_or(Estimator::PlainMc);
    if config.sampler == Some(SamplerKind::Wolff) && h != 0.0 {
        return Err(CoreError::WolffNeedsZeroField(h).into());
    }
    let mut tasks = Vec::new();
    for &beta in &config.betas {
        let task = task_for(config, resolve_level(spec, family, beta, h)?, p)?;
        task.check_level(n)?;
        tasks.push((beta, task));
    }
    let points = par_points(&tasks, |i, &(beta, task)| {
        let seed = derive_seed(config.seed, i as u64);
        let ((est, samples, tag), secs) = timed(|| {
            let law = build_law(config, family, n, ModelParams::new(beta, h)?, seed)?;
            let est = estimate_pe(law.source(), &task, method, mc_settings(config, &law, seed))?;
            let samples = match &law {
                Law::Chain(b) => b.len(),
                Law::Pmf(_) => 0,
            };
            Ok((est, samples, law.tag()))
        })?;
        let rec = PointRecord {
            key: key(&[("beta", beta.to_string())]),
            seconds: secs,
            method: format!("{} over {tag}", est.method),
            note: None,
        };
        Ok((est, samples, rec))
    })?;
    let mut table = Table::new(&["beta", "pe", "stderr", "n_samples", "boundary"]);
    let mut manifest = RunManifest::new(config.clone());
    for (&(beta, _), (est, samples, rec)) in tasks.iter().zip(points) {
        table.push(vec![
            beta.into(),
            est.pe.into(),
            est.stderr.into(),
            samples.into(),
            config.boundary.name().into(),
        ]);
        manifest.points.push(rec);
    }
    manifest.summary.insert("beta_c".into(), json!(LATTICE_BETA_C));
    Ok(Report { table, manifest })
}

pub fn cmd_asymptotics(config: &RunConfig) -> CliResult<Report> {
    let family = single(&config.graphs, "graph", "asymptotics")?;
    let h = single(&config.hs, "h", "asymptotics")?;
    let spec = single(&config.levels, "S", "asymptotics")?;
    let p = single(&config.ps, "p", "asymptotics")?;
    let mut table = Table::new(&[
        "family",
        "beta",
        "h",
        "psi",
        "mean_kind",
        "mu",
        "sigma2",
        "regime",
        "S",
        "p",
        "pe_limit_kind",
        "pe_limit",
    ]);
    let mut manifest = RunManifest::new(config.clone());
    for &beta in &config.betas {
        let ((summary, level, limit), secs) = timed(|| {
            let summary = asymptotic_summary(family, beta, h)?;
            let level = resolve_level(spec, family, beta, h)?;
            let limit = pe_limit(&summary, level, p)?;
            Ok((summary, level, limit))
        })?;
        table.push(vec![
            family.name().into(),
            beta.into(),
            h.into(),
            summary.psi.into(),
            serde_json::to_value(summary.mean_kind)?.as_str().unwrap_or_default().into(),
            summary.mu.into(),
            summary.sigma2.into(),
            summary.regime.clone().into(),
            level.into(),
            p.into(),
            limit.kind.to_string().into(),
            limit.numeric().into(),
        ]);
        manifest.points.push(PointRecord {
            key: key(&[("beta", beta.to_string())]),
            seconds: secs,
            method: "closed-form".into(),
            note: None,
        });
    }
    Ok(Report { table, manifest })
}

struct GridCell {
    family: GraphFamily,
    n: usize,
    beta: f64,
    h: f64,
}

pub fn cmd_bounds_check(config: &RunConfig) -> CliResult<Report> {
    let mut cells = Vec::new();
    for &family in &config.graphs {
        for &n in &config.ns {
            if n > MAX_EXACT_N {
                return Err(CliError::Infeasible(format!(
                    "bounds-check needs exact errors, limited to n <= {MAX_EXACT_N}, got {n}"
                )));
            }
            for &beta in &config.betas {
                for &h in &config.hs {
                    cells.push(GridCell { family, n, beta, h });
                }
            }
        }
    }
    let method = config.estimator.unwrap_or(Estimator::ExactSmallN);
    if !matches!(method, Estimator::ExactSmallN | Estimator::RbExact) {
        return Err(CliError::Infeasible(format!("bounds-check compares exact errors, not {method}")));
    }
    let rows_per_cell = config.levels.len() * config.ps.len();

    let points = par_points(&cells, |_, c| {
        let start = Instant::now();
        let g = build_graph(c.family, c.n, config.boundary)?;
        let pmf = exact_pmf(&g, ModelParams::new(c.beta, c.h)?)?;
        let mut rows = Vec::with_capacity(rows_per_cell);
        for &spec in &config.levels {
            let level = resolve_level(spec, c.family, c.beta, c.h)?;
            for &p in &config.ps {
                let task = task_for(config, level, p)?;
                let outcome = match estimate_pe(Source::Pmf(&pmf), &task, method, McSettings::default()) {
                    Ok(est) => Some(est),
                    Err(CoreError::IntegerLevel { .. }) => None,
                    Err(e) => return Err(e.into()),
                };
                rows.push((level, p, outcome));
            }
        }
        let rec = PointRecord {
            key: key(&[
                ("family", c.family.name().to_string()),
                ("n", c.n.to_string()),
                ("beta", c.beta.to_string()),
                ("h", c.h.to_string()),
            ]),
            seconds: start.elapsed().as_secs_f64(),
            method: format!("{method} over exact-pmf"),
            note: None,
        };
        Ok((rows, rec))
    })?;

    let mut table = Table::new(&[
        "family",
        "n",
        "beta",
        "h",
        "S",
        "p",
        "pe",
        "hoeffding_bound",
        "q_limit_value",
        "pass",
        "status",
    ]);
    let mut manifest = RunManifest::new(config.clone());
    let (mut evaluated, mut violations, mut skipped) = (0usize, 0usize, 0usize);
    for (c, (rows, rec)) in cells.iter().zip(points) {
        for (level, p, outcome) in rows {
            let head: Vec<Cell> = vec![
                c.family.name().into(),
                c.n.into(),
                c.beta.into(),
                c.h.into(),
                level.into(),
                p.into(),
            ];
            let tail: Vec<Cell> = match outcome {
                Some(est) => {
                    let bound = est.hoeffding_bound.unwrap_or(f64::NAN);
                    let pass = est.pe <= bound + DOMINANCE_SLACK;
                    evaluated += 1;
                    violations += usize::from(!pass);
                    vec![
                        est.pe.into(),
                        bound.into(),
                        est.q_limit_value.into(),
                        pass.into(),
                        "ok".into(),
                    ]
                }
                None => {
                    skipped += 1;
                    vec![Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, "skipped-integer-level".into()]
                }
            };
            table.push(head.into_iter().chain(tail).collect());
        }
        manifest.points.push(rec);
    }
    if evaluated == 0 {
        return Err(config_err("every grid point has an integer n(1+S)/2; nothing to check"));
    }
    if skipped > 0 {
        manifest
            .notes
            .push(format!("{skipped} grid points skipped because n(1+S)/2 is an integer"));
    }
    manifest.summary.insert("evaluated".into(), json!(evaluated));
    manifest.summary.insert("violations".into(), json!(violations));
    manifest.summary.insert("skipped".into(), json!(skipped));
    Ok(Report { table, manifest })
}

pub fn cmd_probe(config: &RunConfig) -> CliResult<Report> {
    let family = single(&config.graphs, "graph", "probe-concentration")?;
    let h = single(&config.hs, "h", "probe-concentration")?;
    let spec = single(&config.levels, "S", "probe-concentration")?;
    let window = config.window.ok_or_else(|| config_err("probe-concentration needs a window"))?;
    let mut cells = Vec::new();
    for &beta in &config.betas {
        let level = resolve_level(spec, family, beta, h)?;
        for &n in &config.ns {
            cells.push((beta, n, level));
        }
    }
    let points = par_points(&cells, |i, &(beta, n, level)| {
        let seed = derive_seed(config.seed, i as u64);
        let ((res, tag), secs) = timed(|| {
            let law = build_law(config, family, n, ModelParams::new(beta, h)?, seed)?;
            Ok((concentration_probe(law.source(), level, window)?, law.tag()))
        })?;
        let rec = PointRecord {
            key: key(&[("beta", beta.to_string()), ("n", n.to_string())]),
            seconds: secs,
            method: tag,
            note: None,
        };
        Ok((res, rec))
    })?;
    let (mode, width) = match window {
        smd_core::detection::Window::Scaled(w) => ("scaled", w),
        smd_core::detection::Window::Fixed(w) => ("fixed", w),
    };
    let mut table = Table::new(&[
        "family",
        "n",
        "beta",
        "h",
        "S",
        "window",
        "width",
        "probability",
        "stderr",
    ]);
    let mut manifest = RunManifest::new(config.clone());
    let mut per_beta: Vec<(f64, Vec<(usize, f64)>)> = Vec::new();
    for (&(beta, n, level), (res, rec)) in cells.iter().zip(points) {
        table.push(vec![
            family.name().into(),
            n.into(),
            beta.into(),
            h.into(),
            level.into(),
            mode.into(),
            width.into(),
            res.probability.into(),
            res.stderr.into(),
        ]);
        manifest.points.push(rec);
        match per_beta.last_mut() {
            Some((b, pts)) if *b == beta => pts.push((n, res.probability)),
            _ => per_beta.push((beta, vec![(n, res.probability)])),
        }
    }
    if config.ns.len() >= 2 {
        for (beta, pts) in per_beta {
            manifest
                .summary
                .insert(format!("log_rate_slope[beta={beta}]"), json!(log_rate_slope(&pts)));
        }
    }
    Ok(Report { table, manifest })
}

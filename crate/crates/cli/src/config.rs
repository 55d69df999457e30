//! Resolution of flags and config files into a validated `RunConfig`.

use std::fs;
use std::path::PathBuf;

use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use smd_core::detection::{Estimator, ThresholdMode, Window};
use smd_core::engine::mcmc::{DEFAULT_BURN_IN, DEFAULT_THIN};
use smd_core::engine::SamplerKind;
use smd_core::{Boundary, GraphFamily};

use crate::args::{Command, FlagOptions};
use crate::error::{config_err, CliResult};

/// Level as given: a number or the symbolic asymptotic mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevelSpec {
    Value(f64),
    Mu,
}

impl Serialize for LevelSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            LevelSpec::Value(v) => s.serialize_f64(*v),
            LevelSpec::Mu => s.serialize_str("mu"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Everything that determines the data rows. Hashed into `config_hash`.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub graphs: Vec<GraphFamily>,
    pub ns: Vec<usize>,
    pub betas: Vec<f64>,
    pub hs: Vec<f64>,
    pub levels: Vec<LevelSpec>,
    pub ps: Vec<f64>,
    pub delta: f64,
    pub estimator: Option<Estimator>,
    pub sampler: Option<SamplerKind>,
    pub burn_in: usize,
    pub thin: usize,
    pub trials: Option<usize>,
    pub seed: u64,
    pub boundary: Boundary,
    pub threshold_mode: ThresholdMode,
    pub window: Option<Window>,
}

/// Where and how to write; not part of the hash.
#[derive(Debug, Clone)]
pub struct OutputSpec {
    pub out: Option<PathBuf>,
    pub format: Format,
    pub workers: usize,
}

impl RunConfig {
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&canonical);
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// Flags take precedence over the config file.
pub fn merge(flags: &FlagOptions) -> CliResult<FlagOptions> {
    let Some(path) = &flags.config else {
        return Ok(flags.clone());
    };
    let text = fs::read_to_string(path).map_err(|e| config_err(format!("cannot read config '{path}': {e}")))?;
    let file = parse_config_file(&text)?;
    macro_rules! pick {
        ($($f:ident),*) => {
            FlagOptions { $($f: flags.$f.clone().or(file.$f),)* config: flags.config.clone() }
        };
    }
    Ok(pick!(
        graph, n, beta, h, level, p, delta, estimator, sampler, burn_in, thin, trials, seed, boundary,
        threshold_mode, window, width, out, format, workers
    ))
}

pub fn parse_config_file(text: &str) -> CliResult<FlagOptions> {
    let mut o = FlagOptions::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_err(format!("config line {}: expected key=value", lineno + 1)))?;
        let value = Some(value.trim().to_string());
        let slot = match key.trim().replace('_', "-").as_str() {
            "graph" => &mut o.graph,
            "n" => &mut o.n,
            "beta" => &mut o.beta,
            "h" => &mut o.h,
            "S" | "level" => &mut o.level,
            "p" => &mut o.p,
            "delta" => &mut o.delta,
            "estimator" => &mut o.estimator,
            "sampler" => &mut o.sampler,
            "burn-in" => &mut o.burn_in,
            "thin" => &mut o.thin,
            "trials" => &mut o.trials,
            "seed" => &mut o.seed,
            "boundary" => &mut o.boundary,
            "threshold-mode" => &mut o.threshold_mode,
            "window" => &mut o.window,
            "width" => &mut o.width,
            "out" => &mut o.out,
            "format" => &mut o.format,
            "workers" => &mut o.workers,
            other => return Err(config_err(format!("config line {}: unknown key '{other}'", lineno + 1))),
        };
        *slot = value;
    }
    Ok(o)
}

/// A float, or a fraction `a/b`.
pub fn parse_number(s: &str) -> CliResult<f64> {
    let s = s.trim();
    let bad = || config_err(format!("'{s}' is not a number"));
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            a / b
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn parse_list<T>(s: &str, what: &str, f: impl Fn(&str) -> CliResult<T>) -> CliResult<Vec<T>> {
    let items = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(f)
        .collect::<CliResult<Vec<T>>>()?;
    if items.is_empty() {
        return Err(config_err(format!("{what} list is empty")));
    }
    Ok(items)
}

fn parse_usize(s: &str, what: &str) -> CliResult<usize> {
    s.trim()
        .parse()
        .map_err(|_| config_err(format!("{what} must be a nonnegative integer, got '{s}'")))
}

fn parse_with<T: std::str::FromStr>(s: &str) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| config_err(e.to_string()))
}

fn strictly_increasing<T: PartialOrd>(xs: &[T], what: &str) -> CliResult<()> {
    if xs.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(config_err(format!("{what} sweep must be strictly increasing")))
    }
}

fn level_spec(s: &str) -> CliResult<LevelSpec> {
    if s.trim().eq_ignore_ascii_case("mu") {
        Ok(LevelSpec::Mu)
    } else {
        parse_number(s).map(LevelSpec::Value)
    }
}

/// Apply per-command defaults and validate.
pub fn resolve(cmd: Command, o: &FlagOptions) -> CliResult<(RunConfig, OutputSpec)> {
    let grid = cmd == Command::BoundsCheck;
    let scan = cmd == Command::PeVsBeta;

    let graphs = match (&o.graph, cmd) {
        (Some(s), _) => parse_list(s, "graph", parse_with::<GraphFamily>)?,
        (None, Command::BoundsCheck) => vec![
            GraphFamily::Empty,
            GraphFamily::Chain,
            GraphFamily::Ring,
            GraphFamily::Star,
            GraphFamily::Wheel,
            GraphFamily::Complete,
        ],
        (None, Command::PeVsBeta) => vec![GraphFamily::Lattice2D],
        (None, _) => return Err(config_err("--graph is required")),
    };
    let ns = match &o.n {
        Some(s) => parse_list(s, "n", |t| parse_usize(t, "n"))?,
        None if grid => vec![11, 101, 501],
        None if scan => vec![2601],
        None if cmd == Command::Asymptotics => Vec::new(),
        None => return Err(config_err("--n is required")),
    };
    strictly_increasing(&ns, "n")?;
    let betas = match &o.beta {
        Some(s) => parse_list(s, "beta", parse_number)?,
        None if grid => vec![0.2, 0.5],
        None if scan => vec![0.1, 0.3, 0.5, 0.7],
        None => return Err(config_err("--beta is required")),
    };
    strictly_increasing(&betas, "beta")?;
    let hs = match &o.h {
        Some(s) => parse_list(s, "h", parse_number)?,
        None if grid => vec![0.0, 0.3],
        None => vec![0.0],
    };
    let levels = match &o.level {
        Some(s) => parse_list(s, "S", level_spec)?,
        None if grid => vec![LevelSpec::Value(0.0), LevelSpec::Value(1.0 / 3.0)],
        None => vec![LevelSpec::Value(0.0)],
    };
    let ps = match &o.p {
        Some(s) => parse_list(s, "p", parse_number)?,
        None if grid => vec![0.1, 0.3],
        None => vec![0.3],
    };
    let delta = o.delta.as_deref().map(parse_number).transpose()?.unwrap_or(1.0);
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(config_err(format!("delta must lie in (0, 1], got {delta}")));
    }
    let estimator = o.estimator.as_deref().map(parse_with::<Estimator>).transpose()?;
    let sampler = o.sampler.as_deref().map(parse_with::<SamplerKind>).transpose()?;
    let burn_in = o.burn_in.as_deref().map(|s| parse_usize(s, "burn-in")).transpose()?.unwrap_or(DEFAULT_BURN_IN);
    let thin = o.thin.as_deref().map(|s| parse_usize(s, "thin")).transpose()?.unwrap_or(DEFAULT_THIN);
    if burn_in == 0 || thin == 0 {
        return Err(config_err("burn-in and thin must be positive"));
    }
    let trials = o.trials.as_deref().map(|s| parse_usize(s, "trials")).transpose()?;
    if trials == Some(0) {
        return Err(config_err("trials must be positive"));
    }
    let seed = match &o.seed {
        Some(s) => s.trim().parse().map_err(|_| config_err(format!("seed must be a u64, got '{s}'")))?,
        None => 0,
    };
    let boundary = o.boundary.as_deref().map(parse_with::<Boundary>).transpose()?.unwrap_or(Boundary::Free);
    let threshold_mode = o
        .threshold_mode
        .as_deref()
        .map(parse_with::<ThresholdMode>)
        .transpose()?
        .unwrap_or_default();
    let window = if cmd == Command::ProbeConcentration {
        let width = o.width.as_deref().map(parse_number).transpose()?.unwrap_or(1.0);
        if width.is_nan() || width <= 0.0 {
            return Err(config_err(format!("window width must be positive, got {width}")));
        }
        Some(match o.window.as_deref().map(str::trim).unwrap_or("scaled") {
            "scaled" => Window::Scaled(width),
            "fixed" => Window::Fixed(width),
            other => return Err(config_err(format!("unknown window '{other}' (scaled | fixed)"))),
        })
    } else {
        None
    };
    let format = match o.format.as_deref().map(str::trim) {
        Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        None if cmd == Command::Asymptotics => Format::Json,
        None => Format::Csv,
        Some(other) => return Err(config_err(format!("unknown format '{other}' (csv | json)"))),
    };
    let workers = o.workers.as_deref().map(|s| parse_usize(s, "workers")).transpose()?.unwrap_or(0);

    let config = RunConfig {
        command: cmd.name(),
        graphs,
        ns,
        betas,
        hs,
        levels,
        ps,
        delta,
        estimator,
        sampler,
        burn_in,
        thin,
        trials,
        seed,
        boundary,
        threshold_mode,
        window,
    };
    let output = OutputSpec {
        out: o.out.as_ref().map(PathBuf::from),
        format,
        workers,
    };
    Ok((config, output))
}

/// The one value of a list that a command treats as scalar.
pub fn single<T: Copy>(xs: &[T], what: &str, cmd: &str) -> CliResult<T> {
    match xs {
        [x] => Ok(*x),
        _ => Err(config_err(format!("{cmd} takes a single {what}, got {}", xs.len()))),
    }
}

//! Command-line surface. Every option is a global string flag so that the
//! same spelling works before or after the subcommand and in config files.

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "smd", version, about = "Supermajority detection experiments on Ising networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: FlagOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// CDF of the average sentiment (exact, or empirical on the lattice).
    Cdf,
    /// Error probability against network size.
    PeVsN,
    /// Error probability against coupling on the 2-D lattice.
    PeVsBeta,
    /// Large-n summary and error limit for each coupling.
    Asymptotics,
    /// Exact error against its Hoeffding bound over a parameter grid.
    BoundsCheck,
    /// Mass of the average sentiment inside a window around the level.
    ProbeConcentration,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Cdf => "cdf",
            Command::PeVsN => "pe-vs-n",
            Command::PeVsBeta => "pe-vs-beta",
            Command::Asymptotics => "asymptotics",
            Command::BoundsCheck => "bounds-check",
            Command::ProbeConcentration => "probe-concentration",
        }
    }
}

/// Raw flag values. Lists are comma separated; numbers accept `a/b`.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct FlagOptions {
    /// Graph family (or comma list for bounds-check).
    #[arg(long, global = true)]
    pub graph: Option<String>,
    /// Network size, or comma list of sizes for sweeps.
    #[arg(long, global = true)]
    pub n: Option<String>,
    /// Coupling, or comma list of couplings.
    #[arg(long, global = true)]
    pub beta: Option<String>,
    /// External field.
    #[arg(long, global = true)]
    pub h: Option<String>,
    /// Supermajority level, or `mu` for the asymptotic mean.
    #[arg(long = "S", global = true)]
    pub level: Option<String>,
    /// Channel crossover probability.
    #[arg(long, global = true)]
    pub p: Option<String>,
    /// Observation fraction.
    #[arg(long, global = true)]
    pub delta: Option<String>,
    /// exact | rb-exact | rb-gauss | mc
    #[arg(long, global = true)]
    pub estimator: Option<String>,
    /// metropolis | wolff
    #[arg(long, global = true)]
    pub sampler: Option<String>,
    #[arg(long = "burn-in", global = true)]
    pub burn_in: Option<String>,
    #[arg(long, global = true)]
    pub thin: Option<String>,
    /// Monte Carlo trials, or recorded chain samples on the lattice.
    #[arg(long, global = true)]
    pub trials: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<String>,
    /// free | plus | minus
    #[arg(long, global = true)]
    pub boundary: Option<String>,
    /// delta-scaled | paper-literal
    #[arg(long = "threshold-mode", global = true)]
    pub threshold_mode: Option<String>,
    /// scaled | fixed (probe-concentration)
    #[arg(long, global = true)]
    pub window: Option<String>,
    /// Window width (probe-concentration).
    #[arg(long, global = true)]
    pub width: Option<String>,
    /// Output path; the manifest goes next to it.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// csv | json
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Flat key=value file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<String>,
    /// Worker threads (0 = all cores). Does not change the output.
    #[arg(long, global = true)]
    pub workers: Option<String>,
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qutrit_bell::optimizer::DEFAULT_SEED;
use qutrit_bell::{Error, OptimizerConfig, PureState, SweepMode};

#[derive(Debug, Parser)]
#[command(
    name = "qutrit-bell",
    version,
    about = "Two-qutrit Bell quantity under tritter measurements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Output format; scalar commands default to plain, tables to csv.
    #[arg(long, short, global = true, value_enum)]
    pub format: Option<Format>,

    /// Decimals for scalar values in plain output.
    #[arg(long, global = true, default_value_t = 5)]
    pub digits: usize,

    /// Worker threads for parallel restarts and sweeps.
    #[arg(long, global = true, env = "QUTRIT_BELL_THREADS")]
    pub threads: Option<usize>,

    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Plain,
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[arg(long, global = true, default_value_t = 64)]
    pub restarts: usize,

    #[arg(long, global = true, default_value_t = 2000)]
    pub max_iterations: usize,

    #[arg(long, global = true, default_value_t = 1e-8)]
    pub gradient_tolerance: f64,

    /// Finite-difference step for gradients.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub fd_step: f64,
}

impl OptimizerArgs {
    pub fn config(&self) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            max_iterations: self.max_iterations,
            gradient_tolerance: self.gradient_tolerance,
            seed: self.seed,
            finite_difference_step: self.fd_step,
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = true)]
pub struct StateArgs {
    /// Coefficients `a1,a2,a3` with a1^2 + a2^2 + a3^2 = 3.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["a1", "epsilon"])]
    pub state: Option<Vec<f64>>,

    /// First coefficient; the rest is split as a2^2 = eps (3 - a1^2).
    #[arg(long, allow_negative_numbers = true, requires = "epsilon")]
    pub a1: Option<f64>,

    #[arg(long, requires = "a1")]
    pub epsilon: Option<f64>,
}

impl StateArgs {
    pub fn resolve(&self) -> qutrit_bell::Result<PureState> {
        match (&self.state, self.a1, self.epsilon) {
            (Some(a), _, _) => match a[..] {
                [a1, a2, a3] => PureState::new(a1, a2, a3),
                _ => Err(Error::Config(format!(
                    "--state needs exactly 3 coefficients, got {}",
                    a.len()
                ))),
            },
            (None, Some(a1), Some(eps)) => PureState::from_a1_epsilon(a1, eps),
            _ => unreachable!("clap enforces one complete state form"),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic maximum of S and the noise threshold.
    Smax {
        #[command(flatten)]
        state: StateArgs,
        /// Also run the optimizer.
        #[arg(long)]
        numeric: bool,
    },
    /// Analytic minimum of S.
    Smin {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        numeric: bool,
    },
    /// Multi-start search over the twelve tritter phases.
    Optimize {
        #[command(flatten)]
        state: StateArgs,
        /// Minimize instead of maximize.
        #[arg(long)]
        minimize: bool,
    },
    /// Extremes of S over deterministic local strategies.
    Lhv,
    /// S_max and S_min along a1 at fixed epsilon.
    SweepFig1 {
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long, default_value_t = 121)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
    /// Violation region on an (a1, epsilon) grid.
    RegionFig2 {
        #[arg(long, default_value_t = 200)]
        a1_steps: usize,
        #[arg(long, default_value_t = 100)]
        epsilon_steps: usize,
        /// Also write bisected boundary points (always CSV).
        #[arg(long)]
        boundary: Option<PathBuf>,
        #[arg(long, default_value_t = 400)]
        boundary_scan: usize,
    },
    /// Tritter versus rotated-basis optimum for a1 = 1.56, epsilon = 0.5.
    Section4,
    /// Cross-checks between the independent computation routes.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Analytic,
    Numeric,
    Both,
}

impl From<Mode> for SweepMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Analytic => SweepMode::Analytic,
            Mode::Numeric => SweepMode::Numeric,
            Mode::Both => SweepMode::Both,
        }
    }
}

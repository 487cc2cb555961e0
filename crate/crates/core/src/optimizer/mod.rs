//! Multi-start local search for the extrema of `S` over the twelve phases,
//! and exhaustive enumeration of deterministic local strategies.
//!
//! Each restart draws its starting angles from its own ChaCha stream
//! (`seed`, restart index), so results do not depend on how rayon schedules
//! the restarts. Ties between restarts go to the lower index.

mod lhv;
mod local;

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlation::s_via_t;
use crate::error::{Error, Result};
use crate::qstate::{PureState, SettingsConfig};

pub use lhv::{lhv_extrema, lhv_s, LhvExtrema, LhvStrategy};

pub const DEFAULT_SEED: u64 = 0x5eed_2003_0001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
    pub seed: u64,
    pub finite_difference_step: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iterations: 2000,
            gradient_tolerance: 1e-8,
            seed: DEFAULT_SEED,
            finite_difference_step: 1e-6,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be positive".into()));
        }
        if !(self.gradient_tolerance > 0.0 && self.gradient_tolerance.is_finite()) {
            return Err(Error::Config("gradient_tolerance must be a positive number".into()));
        }
        if !(self.finite_difference_step > 0.0 && self.finite_difference_step.is_finite()) {
            return Err(Error::Config("finite_difference_step must be a positive number".into()));
        }
        Ok(())
    }

    fn local(&self) -> local::LocalSettings {
        local::LocalSettings {
            max_iterations: self.max_iterations,
            gradient_tolerance: self.gradient_tolerance,
            step: self.finite_difference_step,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Goal {
    Maximize,
    Minimize,
}

impl Goal {
    fn sign(self) -> f64 {
        match self {
            Goal::Maximize => -1.0,
            Goal::Minimize => 1.0,
        }
    }

    fn better(self, a: f64, b: f64) -> bool {
        match self {
            Goal::Maximize => a > b,
            Goal::Minimize => a < b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_s: f64,
    pub best_settings: SettingsConfig,
    /// Infinity norm of the finite-difference gradient at `best_settings`.
    pub gradient_norm: f64,
    pub restarts_used: usize,
    pub converged: bool,
}

/// Outcome of one local search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RestartOutcome {
    pub index: usize,
    pub value: f64,
    pub settings: SettingsConfig,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Starting angles for restart `index`: uniform on `[0, 2pi)^12`.
pub fn restart_start(seed: u64, index: usize) -> [f64; 12] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    std::array::from_fn(|_| rng.gen_range(0.0..TAU))
}

/// Local search of `objective` from `start`.
pub fn polish<F>(objective: &F, goal: Goal, start: &[f64; 12], config: &OptimizerConfig) -> RestartOutcome
where
    F: Fn(&[f64; 12]) -> f64,
{
    let sign = goal.sign();
    let signed = |x: &[f64; 12]| sign * objective(x);
    let out = local::minimize(&signed, *start, &config.local());
    RestartOutcome {
        index: 0,
        value: sign * out.value,
        settings: SettingsConfig::from_angles(&out.x),
        gradient_norm: out.gradient_norm,
        iterations: out.iterations,
        converged: out.converged,
    }
}

/// All restarts, in index order.
pub fn run_restarts<F>(objective: &F, goal: Goal, config: &OptimizerConfig) -> Result<Vec<RestartOutcome>>
where
    F: Fn(&[f64; 12]) -> f64 + Sync,
{
    config.validate()?;
    Ok((0..config.restarts)
        .into_par_iter()
        .map(|index| {
            let start = restart_start(config.seed, index);
            RestartOutcome {
                index,
                ..polish(objective, goal, &start, config)
            }
        })
        .collect())
}

/// Best of `config.restarts` local searches.
pub fn optimize<F>(objective: &F, goal: Goal, config: &OptimizerConfig) -> Result<OptimizationResult>
where
    F: Fn(&[f64; 12]) -> f64 + Sync,
{
    let runs = run_restarts(objective, goal, config)?;
    let best = runs
        .iter()
        .reduce(|best, r| if goal.better(r.value, best.value) { r } else { best })
        .expect("at least one restart");
    Ok(OptimizationResult {
        best_s: best.value,
        best_settings: best.settings,
        gradient_norm: best.gradient_norm,
        restarts_used: runs.len(),
        converged: best.converged,
    })
}

fn tritter_objective(state: &PureState) -> impl Fn(&[f64; 12]) -> f64 + Sync + '_ {
    move |x| s_via_t(state, &SettingsConfig::from_angles(x))
}

pub fn maximize_s(state: &PureState, config: &OptimizerConfig) -> Result<OptimizationResult> {
    optimize(&tritter_objective(state), Goal::Maximize, config)
}

pub fn minimize_s(state: &PureState, config: &OptimizerConfig) -> Result<OptimizationResult> {
    optimize(&tritter_objective(state), Goal::Minimize, config)
}

/// `dS/dphi` for all twelve angles (order `A1, A2, B1, B2`), by central
/// differences of [`s_via_t`].
pub fn gradient_s(state: &PureState, settings: &SettingsConfig, step: f64) -> [f64; 12] {
    local::central_gradient(&tritter_objective(state), &settings.to_angles(), step)
}

pub fn gradient_norm(gradient: &[f64; 12]) -> f64 {
    local::inf_norm(gradient)
}

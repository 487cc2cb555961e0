//! Parameter sweeps over the `(a1, epsilon)` family, the violation region
//! and its boundary, and the comparison between tritter measurements and the
//! rotated basis `{(|1>+|2>)/sqrt2, (|1>-|2>)/sqrt2, |3>}`.
//!
//! Rows are computed in parallel and always returned in grid order.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{s_max_analytic, Branch, LOCAL_UPPER_BOUND};
use crate::correlation::{s_value_with, t_coefficients, CoefficientPair};
use crate::error::{Error, Result};
use crate::optimizer::{maximize_s, minimize_s, optimize, polish, restart_start, run_restarts, Goal, OptimizerConfig};
use crate::qstate::{rotated_tritter_basis, section4_basis, PhaseTriple, PureState, SettingsConfig};

/// Significant digits used for every number written to CSV.
pub const CSV_SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    Analytic,
    Numeric,
    Both,
}

impl SweepMode {
    fn numeric(self) -> bool {
        matches!(self, SweepMode::Numeric | SweepMode::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub a1_min: f64,
    pub a1_max: f64,
    pub a1_steps: usize,
    pub epsilon: f64,
    pub mode: SweepMode,
}

impl Default for SweepSpec {
    fn default() -> Self {
        let r = 3f64.sqrt();
        Self {
            a1_min: -r,
            a1_max: r,
            a1_steps: 121,
            epsilon: 0.5,
            mode: SweepMode::Both,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let r = 3f64.sqrt();
        for a1 in [self.a1_min, self.a1_max] {
            if a1.is_nan() || a1.abs() > r {
                return Err(Error::A1OutOfRange(a1));
            }
        }
        if self.a1_min > self.a1_max {
            return Err(Error::Config("a1_min must not exceed a1_max".into()));
        }
        if self.a1_steps == 0 {
            return Err(Error::Config("a1_steps must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::EpsilonOutOfRange(self.epsilon));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        linspace(self.a1_min, self.a1_max, self.a1_steps)
    }
}

/// Evenly spaced, mirror-exact when `lo == -hi`.
fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let d = (n - 1) as f64;
    (0..n).map(|i| ((n - 1 - i) as f64 * lo + i as f64 * hi) / d).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub epsilon: f64,
    pub s_max_analytic: f64,
    pub s_min_analytic: f64,
    pub s_max_numeric: Option<f64>,
    pub s_min_numeric: Option<f64>,
    pub branch: Branch,
    pub violates: bool,
    /// Product realizing `K1`.
    #[serde(skip)]
    pub k1_source: Option<CoefficientPair>,
}

pub fn sweep_row(a1: f64, epsilon: f64, numeric: Option<&OptimizerConfig>) -> Result<SweepRow> {
    let state = PureState::from_a1_epsilon(a1, epsilon)?;
    let report = s_max_analytic(&state);
    let (s_max_numeric, s_min_numeric) = match numeric {
        Some(config) => (
            Some(maximize_s(&state, config)?.best_s),
            Some(minimize_s(&state, config)?.best_s),
        ),
        None => (None, None),
    };
    Ok(SweepRow {
        a1: state.a1(),
        a2: state.a2(),
        a3: state.a3(),
        epsilon,
        s_max_analytic: report.s_max,
        s_min_analytic: report.s_min,
        s_max_numeric,
        s_min_numeric,
        branch: report.branch,
        violates: report.violates_upper,
        k1_source: Some(report.k.pairs[0]),
    })
}

/// One row per `a1` grid point at fixed `epsilon`, ordered by `a1`.
pub fn sweep_fig1(spec: &SweepSpec, config: &OptimizerConfig) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let numeric = spec.mode.numeric().then_some(config);
    if let Some(c) = numeric {
        c.validate()?;
    }
    spec.grid()
        .into_par_iter()
        .map(|a1| sweep_row(a1, spec.epsilon, numeric))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionCell {
    pub a1: f64,
    pub epsilon: f64,
    pub s_max: f64,
    pub violates: bool,
}

/// Analytic `S_max` on an `a1_steps x epsilon_steps` grid over
/// `[-sqrt3, sqrt3] x [0, 1]`, epsilon-major.
pub fn violation_region(a1_steps: usize, epsilon_steps: usize) -> Result<Vec<RegionCell>> {
    if a1_steps < 2 || epsilon_steps < 2 {
        return Err(Error::Config("region grid needs at least 2 steps per axis".into()));
    }
    let r = 3f64.sqrt();
    let a1_grid = linspace(-r, r, a1_steps);
    let eps_grid = linspace(0.0, 1.0, epsilon_steps);
    eps_grid
        .par_iter()
        .flat_map_iter(|&epsilon| {
            a1_grid.iter().map(move |&a1| {
                let state = PureState::from_a1_epsilon(a1, epsilon)?;
                let s_max = s_max_analytic(&state).s_max;
                Ok(RegionCell {
                    a1,
                    epsilon,
                    s_max,
                    violates: s_max > LOCAL_UPPER_BOUND,
                })
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub epsilon: f64,
    pub a1: f64,
    pub s_max: f64,
}

fn s_max_at(a1: f64, epsilon: f64) -> Result<f64> {
    Ok(s_max_analytic(&PureState::from_a1_epsilon(a1, epsilon)?).s_max)
}

/// Points where `S_max = 2`, found per `epsilon` by scanning `a1` on
/// `scan_steps` points and bisecting every sign change of `S_max - 2`.
pub fn violation_boundary(epsilon_steps: usize, scan_steps: usize) -> Result<Vec<BoundaryPoint>> {
    if epsilon_steps < 2 || scan_steps < 2 {
        return Err(Error::Config("boundary scan needs at least 2 steps per axis".into()));
    }
    let r = 3f64.sqrt();
    let scan = linspace(-r, r, scan_steps);
    let per_eps: Vec<Vec<BoundaryPoint>> = linspace(0.0, 1.0, epsilon_steps)
        .into_par_iter()
        .map(|epsilon| {
            let above = |a1: f64| s_max_at(a1, epsilon).map(|s| s > LOCAL_UPPER_BOUND);
            let mut points = Vec::new();
            for w in scan.windows(2) {
                let (mut lo, mut hi) = (w[0], w[1]);
                let lo_side = above(lo)?;
                if lo_side == above(hi)? {
                    continue;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if above(mid)? == lo_side {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let a1 = 0.5 * (lo + hi);
                points.push(BoundaryPoint {
                    epsilon,
                    a1,
                    s_max: s_max_at(a1, epsilon)?,
                });
            }
            Ok(points)
        })
        .collect::<Result<_>>()?;
    Ok(per_eps.into_iter().flatten().collect())
}

/// Tritter-optimal settings of one vertex class carried over to the rotated basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexTransfer {
    /// Coefficient whose `|T|` is saturated at `4/3`.
    pub saturated: CoefficientPair,
    pub tritter_s: f64,
    pub tritter_settings: SettingsConfig,
    /// Rotated-basis `S` at the unchanged tritter settings.
    pub custom_s_at_transfer: f64,
    /// After local ascent from a small perturbation of those settings.
    pub custom_s_polished: f64,
    pub polished_settings: SettingsConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section4Comparison {
    pub state: PureState,
    pub tritter_s_max: f64,
    /// Rotated-basis value on the vertex where `T13` saturates.
    pub custom_basis_s_max: f64,
    pub transfers: Vec<VertexTransfer>,
    /// Best rotated-basis value over a full multi-start search of all
    /// twelve phases.
    pub custom_basis_global_max: f64,
    pub custom_basis_global_settings: SettingsConfig,
}

pub const SECTION4_A1: f64 = 1.56;
pub const SECTION4_EPSILON: f64 = 0.5;

/// `S` through the projector pipeline when every setting measures in the
/// rotated basis `V^+ U(phi)^+ |l>`.
pub fn custom_basis_s(state: &PureState, settings: &SettingsConfig) -> f64 {
    let x = section4_basis();
    s_value_with(state, settings, |p: &PhaseTriple| rotated_tritter_basis(p, &x))
}

/// Tritter `S_max` against the rotated basis for `a1 = 1.56`, `epsilon = 0.5`.
///
/// The tritter optimum of this state is degenerate (`|a1 a2| = |a1 a3|`):
/// restarts land on a vertex with either `T12` or `T13` saturated. Both
/// settings are stationary for the rotated-basis `S` as well, with different
/// values, so each class is reported separately.
pub fn section4_comparison(config: &OptimizerConfig) -> Result<Section4Comparison> {
    let state = PureState::from_a1_epsilon(SECTION4_A1, SECTION4_EPSILON)?;
    let tritter_s_max = s_max_analytic(&state).s_max;
    let custom = |x: &[f64; 12]| custom_basis_s(&state, &SettingsConfig::from_angles(x));

    let tritter = |x: &[f64; 12]| crate::correlation::s_via_t(&state, &SettingsConfig::from_angles(x));
    let runs = run_restarts(&tritter, Goal::Maximize, config)?;

    let mut transfers: Vec<VertexTransfer> = Vec::new();
    for run in runs.iter().filter(|r| (r.value - tritter_s_max).abs() < 1e-6) {
        let saturated = t_coefficients(&run.settings).dominant();
        if transfers.iter().any(|t| t.saturated == saturated) {
            continue;
        }
        let angles = run.settings.to_angles();
        let jitter = restart_start(config.seed ^ 0x5ec4, run.index);
        let start: [f64; 12] = std::array::from_fn(|i| angles[i] + 1e-3 * (jitter[i] / std::f64::consts::PI - 1.0));
        let polished = polish(&custom, Goal::Maximize, &start, config);
        transfers.push(VertexTransfer {
            saturated,
            tritter_s: run.value,
            tritter_settings: run.settings,
            custom_s_at_transfer: custom(&angles),
            custom_s_polished: polished.value,
            polished_settings: polished.settings,
        });
    }
    transfers.sort_by_key(|t| t.saturated);

    let custom_basis_s_max = transfers
        .iter()
        .find(|t| t.saturated == CoefficientPair::A1A3)
        .map(|t| t.custom_s_polished)
        .ok_or_else(|| Error::Config("no restart reached the T13-saturated tritter optimum; raise restarts".into()))?;

    let global = optimize(&custom, Goal::Maximize, config)?;
    Ok(Section4Comparison {
        state,
        tritter_s_max,
        custom_basis_s_max,
        transfers,
        custom_basis_global_max: global.best_s,
        custom_basis_global_settings: global.best_settings,
    })
}

/// Formats with `digits` significant digits in fixed notation.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new leading digit (9.99.. -> 10.0..), which is harmless
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0".into()
    } else {
        s
    }
}

fn num(x: f64) -> String {
    format_sig(x, CSV_SIGNIFICANT_DIGITS)
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::Output(e.to_string())
}

pub const SWEEP_COLUMNS: [&str; 10] = [
    "a1",
    "a2",
    "a3",
    "epsilon",
    "s_max_analytic",
    "s_min_analytic",
    "s_max_numeric",
    "s_min_numeric",
    "branch",
    "violates",
];

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_COLUMNS).map_err(csv_error)?;
    for r in rows {
        w.write_record([
            num(r.a1),
            num(r.a2),
            num(r.a3),
            num(r.epsilon),
            num(r.s_max_analytic),
            num(r.s_min_analytic),
            opt(r.s_max_numeric),
            opt(r.s_min_numeric),
            r.branch.label().to_string(),
            r.violates.to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(csv_error)
}

pub fn write_region_csv<W: Write>(cells: &[RegionCell], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["a1", "epsilon", "s_max", "violates"])
        .map_err(csv_error)?;
    for c in cells {
        w.write_record([num(c.a1), num(c.epsilon), num(c.s_max), c.violates.to_string()])
            .map_err(csv_error)?;
    }
    w.flush().map_err(csv_error)
}

pub fn write_boundary_csv<W: Write>(points: &[BoundaryPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["epsilon", "a1", "s_max"]).map_err(csv_error)?;
    for p in points {
        w.write_record([num(p.epsilon), num(p.a1), num(p.s_max)])
            .map_err(csv_error)?;
    }
    w.flush().map_err(csv_error)
}

pub fn write_json<T: Serialize + ?Sized, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value).map_err(csv_error)?;
    writeln!(out).map_err(csv_error)
}

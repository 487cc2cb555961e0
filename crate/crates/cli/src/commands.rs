use std::fmt::Write as _;

use anyhow::{bail, Result};
use qutrit_bell::analytic::LOCAL_UPPER_BOUND;
use qutrit_bell::experiments::{format_sig, write_boundary_csv, write_json, write_region_csv, write_sweep_csv};
use qutrit_bell::selftest;
use qutrit_bell::{
    f_thr, lhv_extrema, maximize_s, minimize_s, s_max_analytic, s_min_analytic, section4_comparison, sweep_fig1,
    violation_boundary, violation_region, OptimizationResult, OptimizerConfig, PureState, SettingsConfig, SweepSpec,
};
use serde::Serialize;

use crate::args::{Command, Format};

const ANGLE_DIGITS: usize = 12;

pub struct Rendered {
    pub body: Vec<u8>,
    /// Set when the command computed its result but the result is a failure
    /// (selftest).
    pub failed: bool,
}

impl Rendered {
    fn ok(body: Vec<u8>) -> Self {
        Self { body, failed: false }
    }
}

struct Ctx {
    format: Option<Format>,
    digits: usize,
    config: OptimizerConfig,
}

impl Ctx {
    fn scalar_format(&self, command: &str) -> Result<Format> {
        match self.format.unwrap_or(Format::Plain) {
            Format::Csv => bail!("{command} has no csv output; use plain or json"),
            f => Ok(f),
        }
    }

    fn table_format(&self, command: &str) -> Result<Format> {
        match self.format.unwrap_or(Format::Csv) {
            Format::Plain => bail!("{command} writes a table; use csv or json"),
            f => Ok(f),
        }
    }

    fn num(&self, x: f64) -> String {
        let s = format!("{x:.*}", self.digits);
        // avoid "-0.00000"
        if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
            s.trim_start_matches('-').to_string()
        } else {
            s
        }
    }
}

pub fn run(command: &Command, format: Option<Format>, digits: usize, config: OptimizerConfig) -> Result<Rendered> {
    let ctx = Ctx { format, digits, config };
    match command {
        Command::Smax { state, numeric } => smax(&ctx, &state.resolve()?, *numeric),
        Command::Smin { state, numeric } => smin(&ctx, &state.resolve()?, *numeric),
        Command::Optimize { state, minimize } => optimize(&ctx, &state.resolve()?, *minimize),
        Command::Lhv => lhv(&ctx),
        Command::SweepFig1 { epsilon, steps, mode } => {
            let spec = SweepSpec {
                a1_steps: *steps,
                epsilon: *epsilon,
                mode: (*mode).into(),
                ..SweepSpec::default()
            };
            let format = ctx.table_format("sweep-fig1")?;
            let rows = sweep_fig1(&spec, &ctx.config)?;
            let mut out = Vec::new();
            match format {
                Format::Json => write_json(&rows, &mut out)?,
                _ => write_sweep_csv(&rows, &mut out)?,
            }
            Ok(Rendered::ok(out))
        }
        Command::RegionFig2 {
            a1_steps,
            epsilon_steps,
            boundary,
            boundary_scan,
        } => {
            let format = ctx.table_format("region-fig2")?;
            let cells = violation_region(*a1_steps, *epsilon_steps)?;
            if let Some(path) = boundary {
                let points = violation_boundary(*epsilon_steps, *boundary_scan)?;
                let mut buf = Vec::new();
                write_boundary_csv(&points, &mut buf)?;
                crate::write_file(path, &buf)?;
            }
            let mut out = Vec::new();
            match format {
                Format::Json => write_json(&cells, &mut out)?,
                _ => write_region_csv(&cells, &mut out)?,
            }
            Ok(Rendered::ok(out))
        }
        Command::Section4 => section4(&ctx),
        Command::Selftest => run_selftest(&ctx),
    }
}

#[derive(Serialize)]
struct SmaxReport {
    state: PureState,
    s_max: f64,
    s_min: f64,
    branch: qutrit_bell::Branch,
    k: [f64; 3],
    violates: bool,
    f_thr: Option<f64>,
    numeric: Option<OptimizationResult>,
}

fn smax(ctx: &Ctx, state: &PureState, numeric: bool) -> Result<Rendered> {
    let format = ctx.scalar_format("smax")?;
    let report = s_max_analytic(state);
    let numeric = numeric.then(|| maximize_s(state, &ctx.config)).transpose()?;
    let out = SmaxReport {
        state: *state,
        s_max: report.s_max,
        s_min: report.s_min,
        branch: report.branch,
        k: report.k.as_array(),
        violates: report.violates_upper,
        f_thr: report.f_thr,
        numeric,
    };
    if format == Format::Json {
        return json(&out);
    }
    let mut s = String::new();
    writeln!(s, "s_max={}", ctx.num(out.s_max))?;
    writeln!(s, "branch={}", out.branch.label())?;
    let [k1, k2, k3] = out.k;
    writeln!(s, "k={} {} {}", ctx.num(k1), ctx.num(k2), ctx.num(k3))?;
    if let Some(r) = &out.numeric {
        writeln!(s, "s_max_numeric={}", ctx.num(r.best_s))?;
    }
    writeln!(s, "violates={}", out.violates)?;
    match f_thr(out.s_max) {
        Ok(v) if out.s_max > LOCAL_UPPER_BOUND => writeln!(s, "f_thr={}", ctx.num(v))?,
        _ => writeln!(s, "f_thr=none")?,
    }
    Ok(Rendered::ok(s.into_bytes()))
}

#[derive(Serialize)]
struct SminReport {
    state: PureState,
    s_min: f64,
    numeric: Option<OptimizationResult>,
}

fn smin(ctx: &Ctx, state: &PureState, numeric: bool) -> Result<Rendered> {
    let format = ctx.scalar_format("smin")?;
    let out = SminReport {
        state: *state,
        s_min: s_min_analytic(state),
        numeric: numeric.then(|| minimize_s(state, &ctx.config)).transpose()?,
    };
    if format == Format::Json {
        return json(&out);
    }
    let mut s = String::new();
    writeln!(s, "s_min={}", ctx.num(out.s_min))?;
    if let Some(r) = &out.numeric {
        writeln!(s, "s_min_numeric={}", ctx.num(r.best_s))?;
    }
    Ok(Rendered::ok(s.into_bytes()))
}

#[derive(Serialize)]
struct OptimizeReport {
    state: PureState,
    goal: &'static str,
    config: OptimizerConfig,
    analytic: f64,
    result: OptimizationResult,
}

fn optimize(ctx: &Ctx, state: &PureState, minimize: bool) -> Result<Rendered> {
    let format = ctx.scalar_format("optimize")?;
    let (goal, result, analytic) = if minimize {
        ("minimize", minimize_s(state, &ctx.config)?, s_min_analytic(state))
    } else {
        ("maximize", maximize_s(state, &ctx.config)?, s_max_analytic(state).s_max)
    };
    let out = OptimizeReport {
        state: *state,
        goal,
        config: ctx.config,
        analytic,
        result,
    };
    if format == Format::Json {
        return json(&out);
    }
    let mut s = String::new();
    writeln!(s, "best_s={}", ctx.num(result.best_s))?;
    writeln!(s, "analytic={}", ctx.num(analytic))?;
    writeln!(s, "gradient_norm={:.3e}", result.gradient_norm)?;
    writeln!(s, "restarts={}", result.restarts_used)?;
    writeln!(s, "converged={}", result.converged)?;
    write_settings(&mut s, &result.best_settings)?;
    Ok(Rendered::ok(s.into_bytes()))
}

fn write_settings(s: &mut String, settings: &SettingsConfig) -> std::fmt::Result {
    let w = settings.wrapped();
    for (name, p) in [("A1", w.a1), ("A2", w.a2), ("B1", w.b1), ("B2", w.b2)] {
        let [x, y, z] = p.0.map(|v| format_sig(v, ANGLE_DIGITS));
        writeln!(s, "{name}={x} {y} {z}")?;
    }
    Ok(())
}

fn lhv(ctx: &Ctx) -> Result<Rendered> {
    let format = ctx.scalar_format("lhv")?;
    let e = lhv_extrema();
    if format == Format::Json {
        return json(&e);
    }
    Ok(Rendered::ok(format!("max={} min={}\n", e.max_s, e.min_s).into_bytes()))
}

fn section4(ctx: &Ctx) -> Result<Rendered> {
    let format = ctx.scalar_format("section4")?;
    let cmp = section4_comparison(&ctx.config)?;
    if format == Format::Json {
        return json(&cmp);
    }
    let mut s = String::new();
    writeln!(
        s,
        "a1={} a2={} a3={}",
        cmp.state.a1(),
        ctx.num(cmp.state.a2()),
        ctx.num(cmp.state.a3())
    )?;
    writeln!(s, "tritter_s_max={}", ctx.num(cmp.tritter_s_max))?;
    writeln!(s, "custom_basis_s_max={}", ctx.num(cmp.custom_basis_s_max))?;
    for t in &cmp.transfers {
        writeln!(
            s,
            "vertex {}: tritter={} rotated_at_vertex={} rotated_polished={}",
            t.saturated.label(),
            ctx.num(t.tritter_s),
            ctx.num(t.custom_s_at_transfer),
            ctx.num(t.custom_s_polished)
        )?;
    }
    writeln!(s, "custom_basis_global_max={}", ctx.num(cmp.custom_basis_global_max))?;
    write_settings(&mut s, &cmp.custom_basis_global_settings)?;
    Ok(Rendered::ok(s.into_bytes()))
}

fn run_selftest(ctx: &Ctx) -> Result<Rendered> {
    let format = ctx.scalar_format("selftest")?;
    let checks = selftest::run(&ctx.config)?;
    let failed = checks.iter().any(|c| !c.passed);
    let body = if format == Format::Json {
        let mut out = Vec::new();
        write_json(&checks, &mut out)?;
        out
    } else {
        let mut s = String::new();
        for c in &checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(s, "[{tag}] {}: {}", c.name, c.detail)?;
        }
        s.into_bytes()
    };
    Ok(Rendered { body, failed })
}

fn json<T: Serialize>(value: &T) -> Result<Rendered> {
    let mut out = Vec::new();
    write_json(value, &mut out)?;
    Ok(Rendered::ok(out))
}

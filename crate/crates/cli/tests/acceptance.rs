//! Acceptance criteria, one pass/fail line each. Exits nonzero if any fails.

use std::f64::consts::TAU;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qutrit_bell::analytic::{global_optimum, s_bar_max};
use qutrit_bell::correlation::CoefficientPair;
use qutrit_bell::experiments::{sweep_fig1, violation_boundary, violation_region, SweepMode, SweepSpec};
use qutrit_bell::{
    correlation_q, correlation_q_closed_form, f_thr, k_values, lhv_extrema, maximize_s, minimize_s, s_max_analytic,
    s_min_analytic, s_value, s_via_t, section4_comparison, OptimizerConfig, PureState, SettingsConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn random_state(rng: &mut ChaCha8Rng) -> PureState {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let r2: f64 = v.iter().map(|x| x * x).sum();
        if r2 > 1e-6 && r2 <= 1.0 {
            return PureState::normalized_from(v).unwrap();
        }
    }
}

fn random_settings(rng: &mut ChaCha8Rng) -> SettingsConfig {
    let x: [f64; 12] = std::array::from_fn(|_| rng.gen_range(0.0..TAU));
    SettingsConfig::from_angles(&x)
}

fn maximally_entangled() -> Outcome {
    let state = PureState::new(1.0, 1.0, 1.0).unwrap();
    let oracle = 2.0 / 9.0 * (6.0 + 4.0 * 3f64.sqrt());
    let numeric = maximize_s(&state, &OptimizerConfig::default()).unwrap().best_s;
    let analytic = s_max_analytic(&state).s_max;
    outcome(
        (numeric - oracle).abs() < 1e-4 && (analytic - oracle).abs() < 1e-14,
        format!("numeric {numeric:.8}, analytic {analytic:.15}, expected {oracle:.15}"),
    )
}

fn global_optimum_check() -> Outcome {
    let oracle = 1.0 + (11.0f64 / 3.0).sqrt();
    let (s, state) = global_optimum();
    let analytic = s_max_analytic(&state).s_max;
    let numeric = maximize_s(&state, &OptimizerConfig::default()).unwrap().best_s;
    outcome(
        (s - oracle).abs() < 1e-9 && (analytic - oracle).abs() < 1e-9 && (numeric - oracle).abs() < 2e-4,
        format!(
            "analytic {analytic:.10}, numeric {numeric:.8}, expected {oracle:.10} at a1 = {:.6}",
            state.a1()
        ),
    )
}

fn noise_thresholds() -> Outcome {
    let me = f_thr(s_max_analytic(&PureState::maximally_entangled()).s_max).unwrap();
    let opt = f_thr(global_optimum().0).unwrap();
    let (me_s, opt_s) = (format!("{me:.5}"), format!("{opt:.4}"));
    outcome(
        me_s == "0.30385" && opt_s == "0.3139",
        format!("maximally entangled {me_s}, optimal {opt_s}"),
    )
}

fn classical_bounds() -> Outcome {
    let e = lhv_extrema();
    outcome(
        e.max_s == 2.0 && e.min_s == -4.0,
        format!("max={} min={}", e.max_s, e.min_s),
    )
}

fn rotated_basis() -> Outcome {
    let cmp = section4_comparison(&OptimizerConfig::default()).unwrap();
    let (t, c) = (cmp.tritter_s_max, cmp.custom_basis_s_max);
    outcome(
        (t - 1.964).abs() <= 5e-4 && (c - 2.0132).abs() <= 5e-4 && c > 2.0 && 2.0 > t,
        format!(
            "tritter {t:.5}, rotated basis {c:.5} (unrestricted rotated-basis maximum {:.5})",
            cmp.custom_basis_global_max
        ),
    )
}

fn identity_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut ds, mut dq) = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let state = random_state(&mut rng);
        let settings = random_settings(&mut rng);
        ds = ds.max((s_value(&state, &settings) - s_via_t(&state, &settings)).abs());
        for a in [&settings.a1, &settings.a2] {
            for b in [&settings.b1, &settings.b2] {
                dq = dq.max((correlation_q(&state, a, b) - correlation_q_closed_form(&state, a, b)).norm());
            }
        }
    }
    outcome(
        ds < 1e-10 && dq < 1e-10,
        format!("max |dS| = {ds:.2e}, max |dQ| = {dq:.2e}"),
    )
}

fn sweep() -> Outcome {
    let spec = SweepSpec {
        mode: SweepMode::Both,
        ..SweepSpec::default()
    };
    let rows = sweep_fig1(&spec, &OptimizerConfig::default()).unwrap();
    let mut worst = 0.0f64;
    let mut smin_dev = 0.0f64;
    for r in &rows {
        worst = worst
            .max((r.s_max_numeric.unwrap() - r.s_max_analytic).abs())
            .max((r.s_min_numeric.unwrap() - r.s_min_analytic).abs());
        let k_sum = (r.a1 * r.a2).abs() + (r.a1 * r.a3).abs() + (r.a2 * r.a3).abs();
        smin_dev = smin_dev.max((r.s_min_analytic + 4.0 / 3.0 * k_sum).abs());
    }
    let source_ok = rows.iter().all(|r| {
        let expected = if r.a1.abs() < 1.0 {
            CoefficientPair::A2A3
        } else {
            CoefficientPair::A1A2
        };
        r.a1.abs() == 3f64.sqrt() || r.k1_source == Some(expected)
    });
    let switches = rows
        .windows(2)
        .filter(|w| w[0].k1_source != w[1].k1_source && w[0].a2 != 0.0 && w[1].a2 != 0.0);
    let switch_points: Vec<f64> = switches.map(|w| 0.5 * (w[0].a1 + w[1].a1)).collect();
    let step = rows[1].a1 - rows[0].a1;
    let inflexion_ok = switch_points.len() == 2 && switch_points.iter().all(|x| (x.abs() - 1.0).abs() < step);
    outcome(
        rows.len() == 121 && worst <= 2e-4 && smin_dev < 1e-12 && source_ok && inflexion_ok,
        format!(
            "{} rows, max |numeric - analytic| = {worst:.2e}, K1 source switches near a1 = {switch_points:.4?}, \
             max |S_min + 4/3 sum K| = {smin_dev:.1e}",
            rows.len()
        ),
    )
}

fn region() -> Outcome {
    let (na, ne) = (200, 100);
    let cells = violation_region(na, ne).unwrap();
    let at = |i: usize, j: usize| &cells[j * na + i];
    let mut symmetric = cells.len() == na * ne;
    for j in 0..ne {
        for i in 0..na {
            let c = at(i, j);
            for m in [at(na - 1 - i, j), at(i, ne - 1 - j)] {
                symmetric &= (c.s_max - m.s_max).abs() < 1e-12 && c.violates == m.violates;
            }
        }
    }
    let boundary = violation_boundary(ne, 400).unwrap();
    let worst = boundary.iter().fold(0.0f64, |m, p| m.max((p.s_max - 2.0).abs()));
    let inside = s_max_analytic(&PureState::from_a1_epsilon(1.0, 0.5).unwrap()).s_max > 2.0;
    let outside = s_max_analytic(&PureState::from_a1_epsilon(1.56, 0.5).unwrap()).s_max <= 2.0;
    let violating = cells.iter().filter(|c| c.violates).count();
    outcome(
        symmetric && !boundary.is_empty() && worst < 1e-9 && inside && outside,
        format!(
            "{violating}/{} cells violate, symmetric: {symmetric}, {} boundary points with max |S_max - 2| = {worst:.1e}, \
             (1, 0.5) inside: {inside}, (1.56, 0.5) outside: {outside}",
            cells.len(),
            boundary.len()
        ),
    )
}

fn range_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let upper = s_bar_max();
    let config = OptimizerConfig {
        restarts: 2,
        max_iterations: 300,
        ..OptimizerConfig::default()
    };
    let (mut range_ok, mut overshoot) = (true, f64::NEG_INFINITY);
    for _ in 0..10_000 {
        let state = random_state(&mut rng);
        let s_max = s_max_analytic(&state).s_max;
        let s_min = s_min_analytic(&state);
        range_ok &= (0.0..=upper + 1e-12).contains(&s_max) && (-4.0 - 1e-12..=0.0).contains(&s_min);
        range_ok &= (s_min + 4.0 / 3.0 * k_values(&state).sum()).abs() < 1e-12;
        let hi = maximize_s(&state, &config).unwrap().best_s;
        let lo = minimize_s(&state, &config).unwrap().best_s;
        overshoot = overshoot.max(hi - s_max).max(s_min - lo);
    }
    outcome(
        range_ok && overshoot <= 1e-6,
        format!("10000 states in range: {range_ok}, worst optimizer overshoot past analytic = {overshoot:.1e}"),
    )
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("qutrit-bell-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let run = |name: &str, threads: &str| {
        let path = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_qutrit-bell"))
            .args(["sweep-fig1", "--seed", "12345", "--output"])
            .arg(&path)
            .env("QUTRIT_BELL_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(&path).unwrap()
    };
    let a = run("first.csv", "1");
    let b = run("second.csv", "4");
    let _ = std::fs::remove_dir_all(&dir);
    outcome(
        !a.is_empty() && a == b,
        format!("{} bytes, identical: {} (1 vs 4 worker threads)", a.len(), a == b),
    )
}

type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "maximally entangled S_max",
            Some(Duration::from_secs(5)),
            maximally_entangled,
        ),
        ("global optimum", Some(Duration::from_secs(5)), global_optimum_check),
        ("noise thresholds", None, noise_thresholds),
        ("classical bounds", Some(Duration::from_secs(1)), classical_bounds),
        ("rotated-basis comparison", Some(Duration::from_secs(30)), rotated_basis),
        ("identity suite", Some(Duration::from_secs(10)), identity_suite),
        ("a1 sweep at epsilon = 0.5", Some(Duration::from_secs(180)), sweep),
        ("violation region", Some(Duration::from_secs(10)), region),
        ("range property", None, range_property),
        ("sweep determinism", None, determinism),
    ];
    let mut failures = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed < l);
        let passed = result.passed && in_time;
        failures += usize::from(!passed);
        let budget = limit.map(|l| format!(" / {}s", l.as_secs())).unwrap_or_default();
        println!(
            "[{}] {:>2}. {name}: {} ({:.2}s{budget})",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            result.detail,
            elapsed.as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Cross-module consistency checks bundled for the `selftest` command.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{s_max_analytic, S_MAX_MAXIMALLY_ENTANGLED};
use crate::correlation::{correlation_q, correlation_q_closed_form, s_value, s_via_t};
use crate::error::Result;
use crate::experiments::section4_comparison;
use crate::optimizer::{lhv_extrema, maximize_s, OptimizerConfig};
use crate::qstate::{PureState, SettingsConfig};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

fn random_draw(rng: &mut ChaCha8Rng) -> (PureState, SettingsConfig) {
    let state = loop {
        let raw: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        if let Ok(s) = PureState::normalized_from(raw) {
            break s;
        }
    };
    let x: [f64; 12] = std::array::from_fn(|_| rng.gen_range(0.0..TAU));
    (state, SettingsConfig::from_angles(&x))
}

pub fn run(config: &OptimizerConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (mut s_dev, mut q_dev) = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let (state, settings) = random_draw(&mut rng);
        s_dev = s_dev.max((s_value(&state, &settings) - s_via_t(&state, &settings)).abs());
        let a = correlation_q(&state, &settings.a2, &settings.b1);
        let b = correlation_q_closed_form(&state, &settings.a2, &settings.b1);
        q_dev = q_dev.max((a - b).norm());
    }

    let lhv = lhv_extrema();
    let max_ent = maximize_s(&PureState::maximally_entangled(), config)?;
    let analytic = s_max_analytic(&PureState::maximally_entangled()).s_max;
    let s4 = section4_comparison(config)?;

    Ok(vec![
        check(
            "decomposition identity",
            s_dev < 1e-10,
            format!("max |s_value - s_via_t| = {s_dev:.3e}"),
        ),
        check(
            "closed-form correlation",
            q_dev < 1e-10,
            format!("max |Q_pipeline - Q_closed| = {q_dev:.3e}"),
        ),
        check(
            "local bounds",
            lhv.max_s == 2.0 && lhv.min_s == -4.0,
            format!("max={} min={}", lhv.max_s, lhv.min_s),
        ),
        check(
            "maximally entangled optimum",
            (max_ent.best_s - S_MAX_MAXIMALLY_ENTANGLED).abs() < 1e-4
                && (analytic - S_MAX_MAXIMALLY_ENTANGLED).abs() < 1e-12,
            format!("numeric {:.8} analytic {:.8}", max_ent.best_s, analytic),
        ),
        check(
            "rotated-basis comparison",
            (s4.tritter_s_max - 1.964).abs() < 5e-4
                && (s4.custom_basis_s_max - 2.0132).abs() < 5e-4
                && s4.custom_basis_s_max > 2.0,
            format!(
                "tritter {:.5} rotated {:.5} (global {:.5})",
                s4.tritter_s_max, s4.custom_basis_s_max, s4.custom_basis_global_max
            ),
        ),
    ])
}

//! Deterministic local strategies: each of `A1, A2, B1, B2` is assigned one
//! fixed outcome label in `{1, 2, 3}`, so `Q_ij = alpha^(l_i + m_j)`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LhvStrategy {
    /// Outcome labels for `A1`, `A2`.
    pub alice: [u8; 2],
    /// Outcome labels for `B1`, `B2`.
    pub bob: [u8; 2],
}

impl LhvStrategy {
    /// All `3^4 = 81` strategies in lexicographic order.
    pub fn all() -> impl Iterator<Item = LhvStrategy> {
        (0..81u8).map(|code| {
            let digit = |p: u32| code / 3u8.pow(p) % 3 + 1;
            LhvStrategy {
                alice: [digit(3), digit(2)],
                bob: [digit(1), digit(0)],
            }
        })
    }
}

/// `(Re alpha^k, Im alpha^k / sqrt3)`, both exact binary fractions.
fn alpha_scaled(k: u8) -> (f64, f64) {
    match k % 3 {
        0 => (1.0, 0.0),
        1 => (-0.5, 0.5),
        _ => (-0.5, -0.5),
    }
}

/// `S` for a deterministic strategy, evaluated without rounding error.
pub fn lhv_s(strategy: &LhvStrategy) -> f64 {
    // (i, j, sign of Re term, sign of Im term)
    const TERMS: [(usize, usize, f64, f64); 4] = [
        (0, 0, 1.0, 1.0),
        (0, 1, 1.0, -1.0),
        (1, 0, -1.0, -1.0),
        (1, 1, 1.0, 1.0),
    ];
    TERMS
        .iter()
        .map(|&(i, j, re_sign, im_sign)| {
            let (re, im) = alpha_scaled(strategy.alice[i] + strategy.bob[j]);
            re_sign * re + im_sign * im
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LhvExtrema {
    pub max_s: f64,
    pub min_s: f64,
    pub argmax: LhvStrategy,
    pub argmin: LhvStrategy,
}

/// Maximum and minimum of `S` over all 81 deterministic strategies.
pub fn lhv_extrema() -> LhvExtrema {
    let mut it = LhvStrategy::all();
    let first = it.next().expect("81 strategies");
    let v = lhv_s(&first);
    let mut out = LhvExtrema {
        max_s: v,
        min_s: v,
        argmax: first,
        argmin: first,
    };
    for strategy in it {
        let v = lhv_s(&strategy);
        if v > out.max_s {
            out.max_s = v;
            out.argmax = strategy;
        }
        if v < out.min_s {
            out.min_s = v;
            out.argmin = strategy;
        }
    }
    out
}

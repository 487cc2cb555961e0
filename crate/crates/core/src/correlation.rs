//! Complex correlation functions `Q_ij`, the Bell quantity `S`, and its
//! decomposition `S = a1 a2 T12 + a1 a3 T13 + a2 a3 T23`.
//!
//! `S` is available through two independent routes: the projector pipeline
//! ([`s_value`]) and the trigonometric T-coefficients ([`s_via_t`]). The
//! optimizer uses the latter.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qstate::{
    alpha_pow, joint_distribution, tritter_basis, MeasurementBasis, PhaseTriple, PureState, SettingsConfig, INV_SQRT_3,
};

/// Largest attainable `|T_ij|`.
pub const T_BOUND: f64 = 4.0 / 3.0;

/// The four correlation values for settings `(A_i, B_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSet {
    pub q11: Complex64,
    pub q12: Complex64,
    pub q21: Complex64,
    pub q22: Complex64,
}

impl CorrelationSet {
    /// `Re[Q11 + Q12 - Q21 + Q22] + Im[Q11 - Q12 - Q21 + Q22] / sqrt3`.
    pub fn s(&self) -> f64 {
        let re = self.q11 + self.q12 - self.q21 + self.q22;
        let im = self.q11 - self.q12 - self.q21 + self.q22;
        re.re + im.im * INV_SQRT_3
    }

    pub fn max_modulus(&self) -> f64 {
        [self.q11, self.q12, self.q21, self.q22]
            .iter()
            .fold(0.0f64, |m, q| m.max(q.norm()))
    }
}

/// `Q = sum_{l,m} alpha^(l+m) P(a_l, b_m)` with outcome labels `l, m in {1,2,3}`.
pub fn correlation_from_bases(state: &PureState, basis_a: &MeasurementBasis, basis_b: &MeasurementBasis) -> Complex64 {
    let p = joint_distribution(state, basis_a, basis_b);
    let mut q = Complex64::new(0.0, 0.0);
    for (l, row) in p.iter().enumerate() {
        for (m, &prob) in row.iter().enumerate() {
            // 0-based indices; labels are l + 1 and m + 1
            q += alpha_pow((l + m + 2) as i64) * prob;
        }
    }
    q
}

/// Correlation function for tritter measurements, via joint probabilities.
pub fn correlation_q(state: &PureState, phases_a: &PhaseTriple, phases_b: &PhaseTriple) -> Complex64 {
    correlation_from_bases(state, &tritter_basis(phases_a), &tritter_basis(phases_b))
}

/// The quadruple sum over `n, k, l, m` written directly in terms of the
/// state coefficients and phases, with the `1/27` normalization.
pub fn correlation_q_closed_form(state: &PureState, phases_a: &PhaseTriple, phases_b: &PhaseTriple) -> Complex64 {
    let a = state.coefficients();
    let mut q = Complex64::new(0.0, 0.0);
    for n in 0..3 {
        for k in 0..3 {
            let phase = phases_a.0[k] + phases_b.0[k] - phases_a.0[n] - phases_b.0[n];
            let weight = Complex64::from_polar(a[n] * a[k], phase);
            for l in 1..=3i64 {
                for m in 1..=3i64 {
                    let exponent = l + m + (k as i64 - n as i64) * (l + m - 2);
                    q += weight * alpha_pow(exponent);
                }
            }
        }
    }
    q / 27.0
}

/// All four correlations, with the basis for each setting supplied by `basis_of`.
pub fn correlation_set_with<F>(state: &PureState, settings: &SettingsConfig, basis_of: F) -> CorrelationSet
where
    F: Fn(&PhaseTriple) -> MeasurementBasis,
{
    let alice = [basis_of(&settings.a1), basis_of(&settings.a2)];
    let bob = [basis_of(&settings.b1), basis_of(&settings.b2)];
    let q = |i: usize, j: usize| correlation_from_bases(state, &alice[i], &bob[j]);
    CorrelationSet {
        q11: q(0, 0),
        q12: q(0, 1),
        q21: q(1, 0),
        q22: q(1, 1),
    }
}

pub fn correlation_set(state: &PureState, settings: &SettingsConfig) -> CorrelationSet {
    correlation_set_with(state, settings, tritter_basis)
}

/// `S` through the full projector pipeline with tritter bases.
pub fn s_value(state: &PureState, settings: &SettingsConfig) -> f64 {
    correlation_set(state, settings).s()
}

/// `S` through the projector pipeline with an arbitrary basis per setting.
pub fn s_value_with<F>(state: &PureState, settings: &SettingsConfig, basis_of: F) -> f64
where
    F: Fn(&PhaseTriple) -> MeasurementBasis,
{
    correlation_set_with(state, settings, basis_of).s()
}

/// Which two coefficients a T-coefficient (or K-value) couples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoefficientPair {
    A1A2,
    A1A3,
    A2A3,
}

impl CoefficientPair {
    pub const ALL: [CoefficientPair; 3] = [Self::A1A2, Self::A1A3, Self::A2A3];

    /// 0-based level indices.
    pub fn levels(self) -> (usize, usize) {
        match self {
            Self::A1A2 => (0, 1),
            Self::A1A3 => (0, 2),
            Self::A2A3 => (1, 2),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::A1A2 => "a1a2",
            Self::A1A3 => "a1a3",
            Self::A2A3 => "a2a3",
        }
    }

    pub fn product(self, state: &PureState) -> f64 {
        let a = state.coefficients();
        let (i, j) = self.levels();
        a[i] * a[j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TCoefficients {
    pub t12: f64,
    pub t13: f64,
    pub t23: f64,
}

impl TCoefficients {
    pub fn get(&self, pair: CoefficientPair) -> f64 {
        match pair {
            CoefficientPair::A1A2 => self.t12,
            CoefficientPair::A1A3 => self.t13,
            CoefficientPair::A2A3 => self.t23,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.t12, self.t13, self.t23]
    }

    /// The pair with the largest `|T|` (first one on ties).
    pub fn dominant(&self) -> CoefficientPair {
        let mut best = CoefficientPair::A1A2;
        for pair in CoefficientPair::ALL {
            if self.get(pair).abs() > self.get(best).abs() {
                best = pair;
            }
        }
        best
    }
}

/// The three coefficient functions of the twelve angles, term for term.
pub fn t_coefficients(settings: &SettingsConfig) -> TCoefficients {
    let (a1, a2, b1, b2) = (&settings.a1.0, &settings.a2.0, &settings.b1.0, &settings.b2.0);
    // d(x, y, i, j) = x_i - x_j + y_i - y_j with 0-based i, j
    let d = |x: &[f64; 3], y: &[f64; 3], i: usize, j: usize| x[i] - x[j] + y[i] - y[j];
    let s3 = 3f64.sqrt();
    let (cos, sin) = (f64::cos, f64::sin);

    let t12 = (3.0 * cos(d(a2, b1, 0, 1))
        - 3.0 * cos(d(a1, b1, 0, 1))
        - 3.0 * cos(d(a2, b2, 0, 1))
        - s3 * sin(d(a2, b1, 0, 1))
        + s3 * sin(d(a1, b1, 0, 1))
        + 2.0 * s3 * sin(d(a1, b2, 0, 1))
        + s3 * sin(d(a2, b2, 0, 1)))
        / 9.0;

    let t13 = -(3.0 * cos(d(a1, b1, 0, 2)) - 3.0 * cos(d(a2, b1, 0, 2))
        + 3.0 * cos(d(a2, b2, 0, 2))
        + s3 * sin(d(a1, b1, 0, 2))
        - s3 * sin(d(a2, b1, 0, 2))
        + 2.0 * s3 * sin(d(a1, b2, 0, 2))
        + s3 * sin(d(a2, b2, 0, 2)))
        / 9.0;

    let t23 = -(3.0 * cos(d(a1, b1, 1, 2)) - 3.0 * cos(d(a2, b1, 1, 2)) + 3.0 * cos(d(a2, b2, 1, 2))
        - s3 * sin(d(a1, b1, 1, 2))
        + s3 * sin(d(a2, b1, 1, 2))
        - 2.0 * s3 * sin(d(a1, b2, 1, 2))
        - s3 * sin(d(a2, b2, 1, 2)))
        / 9.0;

    TCoefficients { t12, t13, t23 }
}

/// `a1 a2 T12 + a1 a3 T13 + a2 a3 T23`.
pub fn s_via_t(state: &PureState, settings: &SettingsConfig) -> f64 {
    let t = t_coefficients(settings);
    let [a1, a2, a3] = state.coefficients();
    a1 * a2 * t.t12 + a1 * a3 * t.t13 + a2 * a3 * t.t23
}

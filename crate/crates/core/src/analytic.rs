//! Closed-form extrema of `S` over tritter settings for a fixed state.
//!
//! With `K1 >= K2 >= K3` the sorted magnitudes of the pairwise products
//! `|a_i a_j|`, the extrema sit on two kinds of vertices of the region swept
//! by `(T12, T13, T23)`:
//!
//! * `(4/3, 4/(3 sqrt3), 4/(3 sqrt3))` with `T1 T2 T3 > 0`, giving
//!   `S1 = (4/3) K1 + (4/(3 sqrt3)) (K2 + K3)`;
//! * `(4/3, 4/3, 4/3)` with `T1 T2 T3 < 0`, giving `S2 = (4/3)(K1 + K2 - K3)`
//!   for the maximum and `-(4/3)(K1 + K2 + K3)` for the minimum.
//!
//! `S_max = max(S1, S2)`. `S2` wins exactly when `K3/K2 < 2 - sqrt3`. A largest
//! coefficient above `sqrt(6 + 3 sqrt3)/2` is sufficient for that but not
//! necessary; [`s_max_amplitude_rule`] keeps the amplitude-based selection
//! available for comparison.

use serde::{Deserialize, Serialize};

use crate::correlation::CoefficientPair;
use crate::error::{Error, Result};
use crate::qstate::PureState;

/// `(2/9)(6 + 4 sqrt3)`: maximum for the maximally entangled state.
pub const S_MAX_MAXIMALLY_ENTANGLED: f64 = 2.872_934_051_172_33;

/// Upper bound for local hidden-variable models.
pub const LOCAL_UPPER_BOUND: f64 = 2.0;

/// Lower bound for local hidden-variable models.
pub const LOCAL_LOWER_BOUND: f64 = -4.0;

/// Threshold noise fraction for the maximally entangled two-qubit state.
pub const QUBIT_F_THR: f64 = 0.29289;

/// Sub-maximal vertex coordinate `4/(3 sqrt3)`.
pub fn t_submaximum() -> f64 {
    4.0 / (3.0 * 3f64.sqrt())
}

/// `1 + sqrt(11/3)`, the largest `S_max` over all states.
pub fn s_bar_max() -> f64 {
    1.0 + (11.0f64 / 3.0).sqrt()
}

/// Pairwise coefficient products sorted by magnitude, largest first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KValues {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    /// Which product each entry came from.
    pub pairs: [CoefficientPair; 3],
}

impl KValues {
    pub fn as_array(&self) -> [f64; 3] {
        [self.k1, self.k2, self.k3]
    }

    pub fn sum(&self) -> f64 {
        self.k1 + self.k2 + self.k3
    }
}

pub fn k_values(state: &PureState) -> KValues {
    let mut entries = CoefficientPair::ALL.map(|p| (p.product(state).abs(), p));
    // stable: ties keep the a1a2, a1a3, a2a3 order
    entries.sort_by(|x, y| y.0.total_cmp(&x.0));
    KValues {
        k1: entries[0].0,
        k2: entries[1].0,
        k3: entries[2].0,
        pairs: entries.map(|e| e.1),
    }
}

pub fn s1(k: &KValues) -> f64 {
    4.0 / 3.0 * k.k1 + t_submaximum() * (k.k2 + k.k3)
}

pub fn s2(k: &KValues) -> f64 {
    4.0 / 3.0 * (k.k1 + k.k2 - k.k3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    S1,
    S2,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::S1 => "S1",
            Branch::S2 => "S2",
        }
    }
}

/// `sqrt(6 + 3 sqrt3)/2 ~ 1.67303`.
pub fn branch_threshold() -> f64 {
    (6.0 + 3.0 * 3f64.sqrt()).sqrt() / 2.0
}

/// `2 - sqrt3`: `S2 > S1` iff `K3/K2` is below this.
pub fn ratio_threshold() -> f64 {
    2.0 - 3f64.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub s_max: f64,
    pub s_min: f64,
    pub branch: Branch,
    pub k: KValues,
    pub a_max: f64,
    /// Only present when `s_max > 2`.
    pub f_thr: Option<f64>,
    pub violates_upper: bool,
}

pub fn s_max_analytic(state: &PureState) -> ViolationReport {
    let k = k_values(state);
    let (v1, v2) = (s1(&k), s2(&k));
    let (s_max, branch) = if v1 >= v2 { (v1, Branch::S1) } else { (v2, Branch::S2) };
    let violates_upper = s_max > LOCAL_UPPER_BOUND;
    ViolationReport {
        s_max,
        s_min: s_min_from_k(&k),
        branch,
        k,
        a_max: state.a_max(),
        f_thr: violates_upper.then(|| 1.0 - 2.0 / s_max),
        violates_upper,
    }
}

/// Branch picked by comparing the largest `|a_i|` with [`branch_threshold`]
/// (`S1` at equality). Agrees with [`s_max_analytic`] except on the sliver
/// where `K3/K2 < 2 - sqrt3` while `max|a_i|` is still below the threshold;
/// there it under-reports.
pub fn s_max_amplitude_rule(state: &PureState) -> (f64, Branch) {
    let k = k_values(state);
    if state.a_max() <= branch_threshold() {
        (s1(&k), Branch::S1)
    } else {
        (s2(&k), Branch::S2)
    }
}

fn s_min_from_k(k: &KValues) -> f64 {
    -4.0 / 3.0 * k.sum()
}

pub fn s_min_analytic(state: &PureState) -> f64 {
    s_min_from_k(&k_values(state))
}

/// The state maximizing `S_max`: `|a1| = sqrt((3/2)(1 - sqrt(3/11)))`,
/// `a2 = a3 = sqrt((3 - a1^2)/2)`.
pub fn global_optimum() -> (f64, PureState) {
    let a1 = (1.5 * (1.0 - (3.0f64 / 11.0).sqrt())).sqrt();
    let rest = ((3.0 - a1 * a1) / 2.0).sqrt();
    let state = PureState::new(a1, rest, rest).expect("optimal state is normalized");
    (s_bar_max(), state)
}

pub fn global_minimum() -> (f64, PureState) {
    (LOCAL_LOWER_BOUND, PureState::maximally_entangled())
}

/// Threshold noise admixture `1 - 2/s_max`.
pub fn f_thr(s_max: f64) -> Result<f64> {
    if s_max.is_nan() || s_max <= 0.0 || s_max.is_infinite() {
        return Err(Error::NonPositiveSMax(s_max));
    }
    Ok(1.0 - 2.0 / s_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn section4_state() -> PureState {
        PureState::from_a1_epsilon(1.56, 0.5).unwrap()
    }

    fn random_state(rng: &mut impl Rng) -> PureState {
        loop {
            let raw: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            if let Ok(s) = PureState::normalized_from(raw) {
                return s;
            }
        }
    }

    #[test]
    fn constants() {
        assert_abs_diff_eq!(
            S_MAX_MAXIMALLY_ENTANGLED,
            2.0 / 9.0 * (6.0 + 4.0 * 3f64.sqrt()),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(branch_threshold(), 1.67303, epsilon = 5e-6);
        assert_abs_diff_eq!(s_bar_max(), 2.91485, epsilon = 5e-6);
        assert_abs_diff_eq!(QUBIT_F_THR, 1.0 - 1.0 / 2f64.sqrt(), epsilon = 5e-6);
    }

    #[test]
    fn k_values_examples() {
        let k = k_values(&PureState::maximally_entangled());
        assert_eq!(k.as_array(), [1.0, 1.0, 1.0]);
        assert_eq!(k.pairs, CoefficientPair::ALL);

        let k = k_values(&PureState::new(3f64.sqrt(), 0.0, 0.0).unwrap());
        assert_eq!(k.as_array(), [0.0, 0.0, 0.0]);

        let k = k_values(&section4_state());
        assert_abs_diff_eq!(k.k1, 0.83018, epsilon = 5e-6);
        assert_abs_diff_eq!(k.k2, 0.83018, epsilon = 5e-6);
        assert_abs_diff_eq!(k.k3, 0.28320, epsilon = 5e-6);
        assert_eq!(k.pairs[2], CoefficientPair::A2A3);
    }

    #[test]
    fn k_values_track_sources_and_signs() {
        let s = PureState::normalized_from([-0.2, 3.0, 1.0]).unwrap();
        let k = k_values(&s);
        assert_eq!(
            k.pairs,
            [CoefficientPair::A2A3, CoefficientPair::A1A2, CoefficientPair::A1A3]
        );
        assert!(k.k3 > 0.0);
    }

    #[test]
    fn maximally_entangled_report() {
        let r = s_max_analytic(&PureState::maximally_entangled());
        assert_abs_diff_eq!(r.s_max, S_MAX_MAXIMALLY_ENTANGLED, epsilon = 1e-14);
        assert_eq!(r.branch, Branch::S1);
        assert_abs_diff_eq!(r.s_min, -4.0, epsilon = 1e-14);
        assert!(r.violates_upper);
        assert_abs_diff_eq!(r.f_thr.unwrap(), 0.30385, epsilon = 5e-6);
    }

    #[test]
    fn section4_state_does_not_violate() {
        let r = s_max_analytic(&section4_state());
        assert_abs_diff_eq!(r.s_max, 1.964, epsilon = 5e-4);
        assert_eq!(r.branch, Branch::S1);
        assert!(!r.violates_upper);
        assert_eq!(r.f_thr, None);
        assert_abs_diff_eq!(r.s_min, -2.59141, epsilon = 5e-5);
    }

    #[test]
    fn product_state_is_degenerate_not_error() {
        let r = s_max_analytic(&PureState::new(0.0, 0.0, -3f64.sqrt()).unwrap());
        assert_eq!((r.s_max, r.s_min), (0.0, 0.0));
    }

    #[test]
    fn global_optimum_values() {
        let (s, state) = global_optimum();
        let oracle = (1.5 * (1.0 - (3.0f64 / 11.0).sqrt())).sqrt();
        assert_abs_diff_eq!(state.a1(), oracle, epsilon = 1e-15);
        assert_abs_diff_eq!(state.a1(), 0.84656, epsilon = 1e-5);
        assert_eq!(state.a2(), state.a3());
        assert_abs_diff_eq!(s_max_analytic(&state).s_max, s, epsilon = 1e-12);
        assert_abs_diff_eq!(f_thr(s).unwrap(), 0.3139, epsilon = 5e-5);
        assert!(s - S_MAX_MAXIMALLY_ENTANGLED > 0.04);
    }

    #[test]
    fn global_minimum_on_grid() {
        let (v, state) = global_minimum();
        assert_eq!(v, -4.0);
        assert_abs_diff_eq!(s_min_analytic(&state), -4.0, epsilon = 1e-14);
        // a1 = k/100 hits 1.00 exactly; eps = j/100 hits 0.50
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for k in -173..=173 {
            for j in 0..=100 {
                let (a1, eps) = (k as f64 / 100.0, j as f64 / 100.0);
                let v = s_min_analytic(&PureState::from_a1_epsilon(a1, eps).unwrap());
                if v < best.0 {
                    best = (v, a1, eps);
                }
            }
        }
        assert_abs_diff_eq!(best.0, -4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(best.1.abs(), 1.0, epsilon = 1e-12);
        assert_eq!(best.2, 0.5);
    }

    #[test]
    fn f_thr_examples() {
        assert_abs_diff_eq!(f_thr(S_MAX_MAXIMALLY_ENTANGLED).unwrap(), 0.30385, epsilon = 5e-6);
        assert_eq!(f_thr(2.0).unwrap(), 0.0);
        assert_eq!(f_thr(0.0), Err(Error::NonPositiveSMax(0.0)));
        assert!(f_thr(-1.0).is_err());
        assert!(f_thr(f64::NAN).is_err());
    }

    #[test]
    fn s2_branch_iff_ratio_below_threshold() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10_000 {
            let s = random_state(&mut rng);
            let r = s_max_analytic(&s);
            let ratio = r.k.k3 / r.k.k2;
            if r.k.k2 > 1e-9 && (ratio - ratio_threshold()).abs() > 1e-9 {
                assert_eq!(r.branch == Branch::S2, ratio < ratio_threshold());
            }
            // amplitude criterion is sufficient for the S2 branch
            if s.a_max() > branch_threshold() {
                assert_eq!(r.branch, Branch::S2);
                assert_eq!(s_max_amplitude_rule(&s).0, r.s_max);
            }
        }
    }

    #[test]
    fn amplitude_rule_is_not_necessary() {
        // on eps = 0.5 the ratio criterion switches at a1^2 = 3/(15 - 8 sqrt3) ~ 1.6197^2
        let s = PureState::from_a1_epsilon(1.6455, 0.5).unwrap();
        assert!(s.a_max() < branch_threshold());
        let exact = s_max_analytic(&s);
        let (rule, branch) = s_max_amplitude_rule(&s);
        assert_eq!(exact.branch, Branch::S2);
        assert_eq!(branch, Branch::S1);
        assert!(exact.s_max - rule > 0.04);
    }

    #[test]
    fn continuity_at_ratio_boundary() {
        let crossing = (3.0 / (15.0 - 8.0 * 3f64.sqrt())).sqrt();
        let k = k_values(&PureState::from_a1_epsilon(crossing, 0.5).unwrap());
        assert_abs_diff_eq!(k.k3 / k.k2, ratio_threshold(), epsilon = 1e-12);
        assert_abs_diff_eq!(s1(&k), s2(&k), epsilon = 1e-9);
    }

    #[test]
    fn continuity_at_amplitude_threshold_in_vanishing_a3_limit() {
        // the amplitude threshold is where the ratio boundary meets a3 = 0
        let a1 = branch_threshold();
        let a2 = (3.0 - a1 * a1).sqrt();
        assert_abs_diff_eq!(a2 / a1, ratio_threshold(), epsilon = 1e-12);
        for a3 in [1e-3, 1e-5, 1e-7] {
            let s = PureState::normalized_from([a1, a2, a3]).unwrap();
            let k = k_values(&s);
            assert!((s1(&k) - s2(&k)).abs() < 10.0 * a3);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn range_bounds(raw in prop::array::uniform3(-1.0..1.0f64)) {
            prop_assume!(raw.iter().map(|v| v * v).sum::<f64>() > 1e-6);
            let s = PureState::normalized_from(raw).unwrap();
            let r = s_max_analytic(&s);
            prop_assert!(r.s_max >= 0.0 && r.s_max <= s_bar_max() + 1e-12);
            prop_assert!(r.s_min >= -4.0 - 1e-12 && r.s_min <= 0.0);
            prop_assert_eq!(r.violates_upper, r.s_max > 2.0);
            prop_assert_eq!(r.f_thr.is_some(), r.violates_upper);
        }
    }

    proptest! {
        #[test]
        fn symmetric_under_permutation_and_sign(
            raw in prop::array::uniform3(-1.0..1.0f64),
            perm in 0usize..6,
            signs in prop::array::uniform3(any::<bool>()),
        ) {
            prop_assume!(raw.iter().map(|v| v * v).sum::<f64>() > 1e-6);
            let s = PureState::normalized_from(raw).unwrap();
            const PERMS: [[usize; 3]; 6] = [[0,1,2],[0,2,1],[1,0,2],[1,2,0],[2,0,1],[2,1,0]];
            let a = s.coefficients();
            let b: [f64; 3] = std::array::from_fn(|i| {
                let v = a[PERMS[perm][i]];
                if signs[i] { -v } else { v }
            });
            let t = PureState::new(b[0], b[1], b[2]).unwrap();
            prop_assert!((s_max_analytic(&s).s_max - s_max_analytic(&t).s_max).abs() < 1e-14);
            prop_assert!((s_min_analytic(&s) - s_min_analytic(&t)).abs() < 1e-14);
        }
    }
}

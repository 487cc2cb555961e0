//! States of the form `(1/sqrt3) * sum_n a_n |n>|n>`, tritter unitaries,
//! measurement bases and joint outcome probabilities.
//!
//! Indices are 0-based internally. Anything a caller sees as an outcome
//! label (`joint_probability`, serialized output) is 1-based.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DIM: usize = 3;

/// Tolerance on `sum a_i^2 = 3` enforced by [`PureState::new`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Tolerance for algebraic identities (unitarity, orthonormality).
pub const ALGEBRAIC_TOLERANCE: f64 = 1e-12;

pub(crate) const INV_SQRT_3: f64 = 0.577_350_269_189_625_8;

/// Primitive cube root of unity `exp(2 pi i / 3)`.
pub fn alpha() -> Complex64 {
    Complex64::from_polar(1.0, TAU / 3.0)
}

/// `alpha^k` for any integer `k`, reduced mod 3 before evaluation.
pub fn alpha_pow(k: i64) -> Complex64 {
    match k.rem_euclid(3) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(-0.5, 0.5 * 3f64.sqrt()),
        _ => Complex64::new(-0.5, -0.5 * 3f64.sqrt()),
    }
}

/// Real coefficients `(a1, a2, a3)` with `a1^2 + a2^2 + a3^2 = 3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawState")]
pub struct PureState {
    a: [f64; 3],
}

#[derive(Deserialize)]
struct RawState {
    a: [f64; 3],
}

impl TryFrom<RawState> for PureState {
    type Error = Error;

    fn try_from(raw: RawState) -> Result<Self> {
        Self::new(raw.a[0], raw.a[1], raw.a[2])
    }
}

impl PureState {
    /// Validates the normalization; never rescales.
    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        let a = [a1, a2, a3];
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let sum_sq: f64 = a.iter().map(|x| x * x).sum();
        if (sum_sq - 3.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::Normalization { sum_sq });
        }
        Ok(Self { a })
    }

    /// Rescales an arbitrary nonzero triple onto `sum a_i^2 = 3`.
    pub fn normalized_from(raw: [f64; 3]) -> Result<Self> {
        if raw.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroState);
        }
        let scale = 3f64.sqrt() / norm;
        Ok(Self {
            a: raw.map(|x| x * scale),
        })
    }

    /// The one-parameter family used for the sweeps:
    /// `a2 = sqrt((3 - a1^2) eps)`, `a3 = sqrt((3 - a1^2)(1 - eps))`.
    pub fn from_a1_epsilon(a1: f64, epsilon: f64) -> Result<Self> {
        if !a1.is_finite() || !epsilon.is_finite() {
            return Err(Error::NonFinite);
        }
        let bound = 3f64.sqrt();
        if a1.abs() > bound + NORMALIZATION_TOLERANCE {
            return Err(Error::A1OutOfRange(a1));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::EpsilonOutOfRange(epsilon));
        }
        let rest = 3.0 - a1 * a1;
        // a rounding residue at |a1| = sqrt3 would otherwise leave a2, a3 ~ 1e-8
        let rest = if rest <= 8.0 * f64::EPSILON { 0.0 } else { rest };
        let a2 = (rest * epsilon).sqrt();
        let a3 = (rest * (1.0 - epsilon)).sqrt();
        Self::new(a1, a2, a3)
    }

    /// `(1, 1, 1)`.
    pub fn maximally_entangled() -> Self {
        Self { a: [1.0; 3] }
    }

    pub fn coefficients(&self) -> [f64; 3] {
        self.a
    }

    pub fn a1(&self) -> f64 {
        self.a[0]
    }

    pub fn a2(&self) -> f64 {
        self.a[1]
    }

    pub fn a3(&self) -> f64 {
        self.a[2]
    }

    /// Largest absolute coefficient.
    pub fn a_max(&self) -> f64 {
        self.a.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Amplitude of `|n>|n>` in the normalized two-qutrit vector.
    pub(crate) fn schmidt_amplitude(&self, n: usize) -> f64 {
        self.a[n] * INV_SQRT_3
    }
}

/// Three phase-shifter settings in radians. Arithmetic accepts any real
/// value; serialization reduces to `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseTriple(pub [f64; 3]);

impl PhaseTriple {
    pub fn new(phi1: f64, phi2: f64, phi3: f64) -> Self {
        Self([phi1, phi2, phi3])
    }

    pub fn zero() -> Self {
        Self([0.0; 3])
    }

    pub fn wrapped(&self) -> Self {
        Self(self.0.map(wrap_angle))
    }

    /// Adds the same offset to all three phases (a global phase of `U`).
    pub fn shifted(&self, offset: f64) -> Self {
        Self(self.0.map(|p| p + offset))
    }
}

/// Reduces an angle to `[0, 2pi)`.
pub fn wrap_angle(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

#[derive(Serialize, Deserialize)]
struct PhaseTripleRepr {
    phi1: f64,
    phi2: f64,
    phi3: f64,
}

impl Serialize for PhaseTriple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let [phi1, phi2, phi3] = self.wrapped().0;
        PhaseTripleRepr { phi1, phi2, phi3 }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PhaseTriple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PhaseTripleRepr::deserialize(d)?;
        Ok(Self([r.phi1, r.phi2, r.phi3]))
    }
}

/// Alice's two settings and Bob's two settings: twelve angles in total.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SettingsConfig {
    pub a1: PhaseTriple,
    pub a2: PhaseTriple,
    pub b1: PhaseTriple,
    pub b2: PhaseTriple,
}

impl SettingsConfig {
    pub const ANGLES: usize = 12;

    /// Angles ordered `A1(phi1..3), A2, B1, B2`.
    pub fn from_angles(x: &[f64; 12]) -> Self {
        let t = |i: usize| PhaseTriple([x[i], x[i + 1], x[i + 2]]);
        Self {
            a1: t(0),
            a2: t(3),
            b1: t(6),
            b2: t(9),
        }
    }

    pub fn to_angles(&self) -> [f64; 12] {
        let mut x = [0.0; 12];
        for (k, t) in [self.a1, self.a2, self.b1, self.b2].iter().enumerate() {
            x[3 * k..3 * k + 3].copy_from_slice(&t.0);
        }
        x
    }

    pub fn wrapped(&self) -> Self {
        Self {
            a1: self.a1.wrapped(),
            a2: self.a2.wrapped(),
            b1: self.b1.wrapped(),
            b2: self.b2.wrapped(),
        }
    }

    pub fn alice(&self, i: usize) -> &PhaseTriple {
        if i == 0 {
            &self.a1
        } else {
            &self.a2
        }
    }

    pub fn bob(&self, j: usize) -> &PhaseTriple {
        if j == 0 {
            &self.b1
        } else {
            &self.b2
        }
    }
}

/// 3x3 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary3 {
    pub entries: [[Complex64; 3]; 3],
}

impl Unitary3 {
    pub fn identity() -> Self {
        let mut entries = [[Complex64::new(0.0, 0.0); 3]; 3];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = Complex64::new(1.0, 0.0);
        }
        Self { entries }
    }

    pub fn adjoint(&self) -> Self {
        let mut entries = [[Complex64::new(0.0, 0.0); 3]; 3];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.entries[j][i].conj();
            }
        }
        Self { entries }
    }

    /// Matrix whose columns are the basis vectors, i.e. `|k> -> |v_k>`.
    pub fn from_basis_columns(basis: &MeasurementBasis) -> Self {
        let mut entries = [[Complex64::new(0.0, 0.0); 3]; 3];
        for (k, v) in basis.vectors.iter().enumerate() {
            for (i, row) in entries.iter_mut().enumerate() {
                row[k] = v[i];
            }
        }
        Self { entries }
    }

    /// `max |(U^+ U - I)_ij|`.
    pub fn unitarity_deviation(&self) -> f64 {
        max_abs_deviation_from_identity(&(self.adjoint() * *self).entries)
    }
}

impl Mul for Unitary3 {
    type Output = Unitary3;

    fn mul(self, rhs: Unitary3) -> Unitary3 {
        let mut entries = [[Complex64::new(0.0, 0.0); 3]; 3];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..DIM).map(|k| self.entries[i][k] * rhs.entries[k][j]).sum();
            }
        }
        Unitary3 { entries }
    }
}

fn max_abs_deviation_from_identity(m: &[[Complex64; 3]; 3]) -> f64 {
    let mut dev = 0.0f64;
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((e - target).norm());
        }
    }
    dev
}

/// Tritter with input phase shifters:
/// `U[i][j] = (1/sqrt3) alpha^(i j) exp(i phi_j)` (0-based `i`, `j`).
pub fn build_tritter(phases: &PhaseTriple) -> Unitary3 {
    let mut entries = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (i, row) in entries.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = alpha_pow((i * j) as i64) * Complex64::from_polar(INV_SQRT_3, phases.0[j]);
        }
    }
    Unitary3 { entries }
}

/// Orthonormal basis `{v_1, v_2, v_3}` defining rank-1 projectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    pub vectors: [[Complex64; 3]; 3],
}

impl MeasurementBasis {
    /// Checks orthonormality to [`ALGEBRAIC_TOLERANCE`].
    pub fn new(vectors: [[Complex64; 3]; 3]) -> Result<Self> {
        let basis = Self { vectors };
        let dev = basis.orthonormality_deviation();
        if dev > ALGEBRAIC_TOLERANCE {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(basis)
    }

    pub fn computational() -> Self {
        Self::from_unitary(&Unitary3::identity())
    }

    /// Basis measured by a device applying `u` before detection in the
    /// computational basis: `v_l = u^+ |l>`.
    pub fn from_unitary(u: &Unitary3) -> Self {
        let mut vectors = [[Complex64::new(0.0, 0.0); 3]; 3];
        for (l, v) in vectors.iter_mut().enumerate() {
            for (n, c) in v.iter_mut().enumerate() {
                *c = u.entries[l][n].conj();
            }
        }
        Self { vectors }
    }

    pub fn inner(&self, i: usize, j: usize) -> Complex64 {
        (0..DIM).map(|n| self.vectors[i][n].conj() * self.vectors[j][n]).sum()
    }

    pub fn orthonormality_deviation(&self) -> f64 {
        let mut gram = [[Complex64::new(0.0, 0.0); 3]; 3];
        for (i, row) in gram.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.inner(i, j);
            }
        }
        max_abs_deviation_from_identity(&gram)
    }

    /// `|v_l><v_l|` for a 0-based `l`.
    pub fn projector(&self, l: usize) -> [[Complex64; 3]; 3] {
        let v = &self.vectors[l];
        let mut p = [[Complex64::new(0.0, 0.0); 3]; 3];
        for (i, row) in p.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = v[i] * v[j].conj();
            }
        }
        p
    }

    /// `max |sum_l |v_l><v_l| - I|`.
    pub fn completeness_deviation(&self) -> f64 {
        let mut sum = [[Complex64::new(0.0, 0.0); 3]; 3];
        for l in 0..DIM {
            let p = self.projector(l);
            for i in 0..DIM {
                for j in 0..DIM {
                    sum[i][j] += p[i][j];
                }
            }
        }
        max_abs_deviation_from_identity(&sum)
    }
}

/// Projectors `U^+ |l><l| U` selected by a tritter setting.
pub fn tritter_basis(phases: &PhaseTriple) -> MeasurementBasis {
    MeasurementBasis::from_unitary(&build_tritter(phases))
}

/// The pre-rotation basis `{(|1>+|2>)/sqrt2, (|1>-|2>)/sqrt2, |3>}`.
pub fn section4_basis() -> MeasurementBasis {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    MeasurementBasis {
        vectors: [[r, r, z], [r, -r, z], [z, z, one]],
    }
}

/// Basis measured when the qutrit first passes a fixed rotation
/// `V: |k> -> |x_k>` and then the tritter, so the device unitary is
/// `U(phases) V` and `v_l = V^+ U^+ |l>`.
pub fn rotated_tritter_basis(phases: &PhaseTriple, pre: &MeasurementBasis) -> MeasurementBasis {
    let device = build_tritter(phases) * Unitary3::from_basis_columns(pre);
    MeasurementBasis::from_unitary(&device)
}

/// Full 3x3 table of joint probabilities, indexed `[l][m]` (0-based).
///
/// Uses the amplitude `<v_l| <v_m| psi> = sum_n (a_n/sqrt3) conj(v_l[n]) conj(v_m[n])`;
/// the density matrix is never formed.
pub fn joint_distribution(state: &PureState, basis_a: &MeasurementBasis, basis_b: &MeasurementBasis) -> [[f64; 3]; 3] {
    let mut p = [[0.0; 3]; 3];
    for (l, row) in p.iter_mut().enumerate() {
        let va = &basis_a.vectors[l];
        for (m, cell) in row.iter_mut().enumerate() {
            let vb = &basis_b.vectors[m];
            let amp: Complex64 = (0..DIM)
                .map(|n| state.schmidt_amplitude(n) * (va[n] * vb[n]).conj())
                .sum();
            *cell = amp.norm_sqr();
        }
    }
    p
}

/// `P(a_l, b_m) = Tr(rho P_l (x) Q_m)` for 1-based outcome labels.
pub fn joint_probability(
    state: &PureState,
    basis_a: &MeasurementBasis,
    basis_b: &MeasurementBasis,
    l: usize,
    m: usize,
) -> Result<f64> {
    for idx in [l, m] {
        if !(1..=DIM).contains(&idx) {
            return Err(Error::OutcomeIndex(idx));
        }
    }
    Ok(joint_distribution(state, basis_a, basis_b)[l - 1][m - 1])
}

//! Two-qutrit CHSH-type Bell quantity under tritter measurements.
//!
//! * [`qstate`]: states, tritter unitaries, measurement bases, joint probabilities.
//! * [`correlation`]: correlation functions `Q_ij`, the quantity `S`, T-coefficients.
//! * [`analytic`]: closed-form `S_max`, `S_min`, global optima, noise thresholds.
//! * [`optimizer`]: multi-start phase optimization and local-strategy enumeration.
//! * [`experiments`]: sweeps, violation region, rotated-basis comparison, CSV/JSON.

pub mod analytic;
pub mod correlation;
pub mod error;
pub mod experiments;
pub mod optimizer;
pub mod qstate;
pub mod selftest;

pub use analytic::{
    f_thr, global_minimum, global_optimum, k_values, s_max_analytic, s_min_analytic, Branch, KValues, ViolationReport,
};
pub use correlation::{
    correlation_q, correlation_q_closed_form, s_value, s_via_t, t_coefficients, CoefficientPair, CorrelationSet,
    TCoefficients,
};
pub use error::{Error, Result};
pub use experiments::{
    section4_comparison, sweep_fig1, violation_boundary, violation_region, Section4Comparison, SweepMode, SweepRow,
    SweepSpec,
};
pub use optimizer::{gradient_s, lhv_extrema, maximize_s, minimize_s, LhvExtrema, OptimizationResult, OptimizerConfig};
pub use qstate::{
    build_tritter, joint_probability, section4_basis, tritter_basis, MeasurementBasis, PhaseTriple, PureState,
    SettingsConfig, Unitary3,
};

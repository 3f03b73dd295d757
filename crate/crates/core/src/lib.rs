//! Generalized grand Lebesgue norms, weighted Fourier-pair norms and the
//! inequalities between them, computed by adaptive quadrature and checked
//! numerically.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ap_space;
pub mod error;
pub mod fourier;
pub mod grand_norm;
pub mod model;
pub mod quadrature;
pub mod report;
pub mod verify;

pub use ap_space::{
    ap_norm, convolution_grand_norm, fourier_side_inequality_report, local_l1_bound_report, module_inequality_report,
    pair_norms, theorem6_inclusion_report, theorem6_inclusion_sweep, APNorm, APNormParams, FourierStrategy, PairNorms,
};
pub use error::{Error, Result, Side};
pub use fourier::{convolve, fourier_analytic, fourier_numeric, Analytic, ConvGrid, NumericTransform};
pub use grand_norm::{
    epsilon_curve, grand_norm, vanishing_limit, Boundary, ClosureVerdict, CurvePoint, GrandNormParams, GrandNormResult,
    VanishingLimit, Variant,
};
pub use model::{FunctionSpec, MeasurableSet, Vector, WeightKind, WeightSpec};
pub use quadrature::{integrate, weighted_lp_norm, Domain, IntegralResult, IntegralTask};
pub use report::{Check, Status, Tolerance, VerificationReport};
pub use verify::{prop5_lower_bound, prop5_sequence, prop6_check, run_suite, RosterEntry, SuiteConfig};

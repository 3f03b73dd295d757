//! Functions, weights and sets on ℝⁿ.

pub(crate) mod envelope;
mod function;
mod set;
mod weight;

#[allow(unused_imports)]
pub(crate) use function::{interp_position, Landmarks};
pub use function::{FunctionSpec, MAX_DIM};
#[allow(unused_imports)]
pub(crate) use set::euclid;
pub use set::{MeasurableSet, Vector};
pub use weight::{
    check_submultiplicative, check_submultiplicative_seeded, grandizer_integrable, Integrability, WeightKind,
    WeightSpec, SUBMULTIPLICATIVE_SLACK,
};

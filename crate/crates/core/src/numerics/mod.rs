//! Convergence-tested series summation, the special functions built on it,
//! and the maps between proper acceleration and the squeezing parameter.

mod accel;
mod series;
mod special;

pub use accel::{
    acceleration_from_schwarzschild, acceleration_from_schwarzschild_with, acceleration_from_squeezing,
    squeezing_from_acceleration, RindlerApprox, DEFAULT_RINDLER_VALIDITY,
};
pub use series::{sum_series, ConvergenceConfig, SeriesResult};
pub use special::{hypergeometric_pfq, lerch_phi, lerch_phi_with, polylog, polylog_with};

/// Binary logarithm.
#[inline]
pub(crate) fn lb(x: f64) -> f64 {
    num_traits::Float::log2(x)
}

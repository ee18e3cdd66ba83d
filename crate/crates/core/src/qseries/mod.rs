//! Truncated power series over exact integers and multiprecision complexes.

mod coeffs;
mod complex;
mod int;
mod phase;

pub use coeffs::{compute_c_coeffs, CoeffPlan, JFactor};
pub use complex::{f_power_in_y, f_series_in_y, ComplexSeries};
pub use int::{eta_factor, expand_g_t, IntSeries};
pub use phase::RationalPhase;

use crate::error::Result;

/// Arithmetic shared by the integer and complex series types.
pub trait TruncatedSeries: Sized {
    fn order(&self) -> usize;
    fn series_mul(&self, other: &Self) -> Result<Self>;
    fn series_inverse(&self) -> Result<Self>;
}

/// Cauchy product truncated at the common order.
pub fn series_mul<S: TruncatedSeries>(a: &S, b: &S) -> Result<S> {
    a.series_mul(b)
}

/// Multiplicative inverse up to the truncation order.
pub fn series_inverse<S: TruncatedSeries>(a: &S) -> Result<S> {
    a.series_inverse()
}

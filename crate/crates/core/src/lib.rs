//! Parity statistics of t-hooks in integer partitions.
//!
//! For `t ≥ 2` the crate counts partitions of `n` by the parity of their
//! number of hook lengths divisible by `t`, and evaluates the difference
//! `A_t(n) = p_t^e(n) − p_t^o(n)` three ways: brute-force enumeration, exact
//! power-series expansion of its generating function, and a convergent
//! Rademacher-type series. The [`distribution`] module builds the limiting
//! statistics on top of those.

pub mod distribution;
pub mod error;
pub mod hp;
pub mod modular;
pub mod partitions;
pub mod qseries;
pub mod rademacher;
pub mod special;

pub use error::{Error, Result};
pub use hp::{HpComplex, HpReal, Precision};

//! Exact arithmetic over Q: sparse polynomials, fractions, univariate
//! polynomials over any tower level.

use std::fmt;

use crate::error::Result;

pub mod frac;
pub mod mpoly;
pub mod tower;
pub mod upoly;

pub use frac::Frac;
pub use mpoly::MPoly;
pub use tower::{tower_reduce, Level, TowerElem};
pub use upoly::UPoly;

/// Coefficient rings for [`UPoly`]. Elements know their ambient ring, so
/// constants are built from an existing element.
pub trait Scalar: Clone + fmt::Debug + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, k: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;
    fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }
    fn pretty(&self, names: &[String]) -> String;
    /// Whether the printed form needs parentheses as a factor.
    fn needs_parens(&self) -> bool;
}

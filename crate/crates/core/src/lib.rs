//! Extending monomial valuations through Nagata extensions by Newton
//! iteration.

pub mod cli;
pub mod error;
pub mod exactalg;
pub mod extend;
pub mod nagata;
pub mod newton;
pub mod ordgroup;
pub mod valring;

pub use error::{Result, VqError};

//! Siegel theta multipliers over the integral symplectic group.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cocycle;
pub mod error;
pub mod exact;
pub mod f2;
pub mod gauss;
pub mod io;
pub mod mu8;
pub mod smith;
pub mod symplectic;
pub mod theta;
pub mod verify;

pub use error::{Error, Result};
pub use mu8::Mu8;

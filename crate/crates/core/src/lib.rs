//! Bounds on the coarse Lipschitz constant of the systole map for punctured
//! surfaces.
//!
//! The crate builds Dehn-twist transition matrices on curve chains, certifies
//! their Perron roots and mixing numbers, and combines them with collar and
//! systole estimates into upper and lower bounds on `K_{g,n}`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod chains;
pub mod error;
pub mod matrix;
pub mod mixing;
pub mod round;
pub mod spectral;
pub mod surfaces;
pub mod twist;

pub use error::{Error, Result};

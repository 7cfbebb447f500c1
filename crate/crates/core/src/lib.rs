//! Spectral integration of constant-coefficient linear boundary value
//! problems on Chebyshev and piecewise Chebyshev grids.

// index loops mirror the recurrences they implement
#![allow(clippy::needless_range_loop)]

pub mod app;
pub mod banded;
pub mod chebyshev;
pub mod diagnostics;
pub mod diffmat;
pub mod error;
pub mod factored;
pub mod integration;
pub mod piecewise;

pub use error::{Error, Result};

//! Exact computations with Frobenius kernels, their Drinfeld doubles and
//! modules over them.

pub mod cohomology;
pub mod error;
pub mod field_linalg;
pub mod hopf;
pub mod kernels;
pub mod modules;
pub mod pi_points;
pub mod suites;

pub use error::{Error, Result};

//! Numerical companion for the hypercontractive Bohnenblust-Hille
//! inequality on the polydisc and its consequences.

pub mod bh;
pub mod bohr;
pub mod campaign;
pub mod dirichlet;
pub mod error;
pub mod index;
pub mod multilinear;
pub mod numeric;
pub mod polarization;
pub mod poly;
pub mod seed;
pub mod sidon;
pub mod supnorm;

pub use error::{Error, Result};
pub use num_complex::Complex64;

//! Bond percolation on square, triangular, hexagonal and mixed lattices,
//! with star–triangle couplings and Monte Carlo arm-event estimators.

pub mod arms;
pub mod config;
pub mod criticality;
pub mod error;
pub mod estimator;
pub mod lattice;
pub mod rng;
pub mod star_triangle;
pub mod union_find;

pub use error::{Error, Result};

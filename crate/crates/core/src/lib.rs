//! Mixed Bruhat sheaves on the two-sided Coxeter complex of a finite Weyl group.

pub mod cousin;
pub mod coxeter;
pub mod error;
pub mod f1;
pub mod faces;
pub mod fq;
pub mod io;
pub mod matrix;
pub mod orbit_poly;
pub mod polynomial;
pub mod rational;
pub mod reps;
pub mod sheaf;
pub mod xi;

pub use error::{Error, Result};
pub use matrix::RationalMatrix;
pub use rational::Rational;

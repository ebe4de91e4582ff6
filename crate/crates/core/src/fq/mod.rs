//! Flags over finite prime fields and the sheaf `E_q` in type A.

pub mod contingency;
pub mod eq;
pub mod field;
pub mod flags;
pub mod hecke;
pub mod points;

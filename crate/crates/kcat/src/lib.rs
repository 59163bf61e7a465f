//! Alcove combinatorics, the periodic Hecke module, and graded lattice objects
//! over the torus-equivariant cohomology ring for root data of rank at most two.

pub mod ajs;
pub mod alcove;
pub mod character;
pub mod error;
pub mod hecke;
pub mod kobj;
pub mod laurent;
pub mod linalg;
pub mod poly;
pub mod root_datum;
pub mod scalar;
pub mod symbolic;
pub mod upoly;
pub mod verify;

pub use error::{Error, Result};

//! Numerical verification of mixed Schwarz inequalities and numerical-radius
//! bounds on dense complex matrices.

pub mod catalog;
pub mod generators;
pub mod linalg;
pub mod radii;

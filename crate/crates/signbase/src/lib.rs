//! Analysis engine for signed digraphs: primitivity and nonpowerfulness
//! tests, local primitive exponents, local bases via exact sign-semiring walk
//! algebra, generators for the extremal digraph families, and a verification
//! harness that reproduces the families' closed-form exponent/base formulas
//! and scans the gap intervals of the local base spectrum.

pub mod bases;
pub mod boolmat;
pub mod cli;
pub mod digraph;
pub mod exponents;
pub mod families;
pub mod report;
pub mod sign;
pub mod verify;

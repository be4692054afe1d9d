//! Invariants of the stable reduction of three point Galois covers in
//! residue characteristic `p`, when `p` divides the group order exactly once.

pub mod algebra;
pub mod deformation;
pub mod dessins;
pub mod lifting;
pub mod superelliptic;
pub mod tail;
pub mod tree;

/// Exact rational numbers.
pub type Q = num_rational::Ratio<i64>;

//! Polynomials and dense matrices over an exact field.

pub mod factor;
pub mod matrix;
pub mod poly;

pub use factor::{rational_irreducible_factors, squarefree_factors, IrreducibleFactor};
pub use matrix::{charpoly, rank, rank_kernel, Mat};
pub use poly::{Poly, PolyRing};

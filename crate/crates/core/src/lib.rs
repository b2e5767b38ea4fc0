//! Exact computation of monodromy Jordan structure, the twisted-coefficient
//! spectral sequence of a mapping torus and the Massey lengths it detects.

pub mod couple;
pub mod error;
pub mod jordan;
pub mod lmodules;
pub mod polyalg;
pub mod random;
pub mod report;
pub mod scalars;
pub mod toruscx;

pub use error::{Error, Result};

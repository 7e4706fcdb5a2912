//! Exact-arithmetic invariants of knots and links from deformations of
//! Yang-Baxter operators: coefficient rings, tensor operators, braid
//! closures, quandle state sums, operator cohomology, and enhanced-operator
//! deformation theory.

pub mod bracket;
pub mod braid;
pub mod catalog;
pub mod checks;
pub mod eybo;
pub mod jones_alex;
pub mod quandle;
pub mod report;
pub mod ring;
pub mod tensor;
pub mod ybcoh;

mod error;

pub use error::{Error, Result};

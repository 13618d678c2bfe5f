//! Exact linear algebra on the weighted invariant ∂̄-complex.

pub mod linalg;
mod sector;

pub use sector::{ClassResidual, Condition, SectorComplex};

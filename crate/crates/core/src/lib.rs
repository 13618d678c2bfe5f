//! Exact engine for first-order obstructions to curves of balanced metrics
//! along deformations of invariant complex structures.

pub mod error;
pub mod scalars;

pub use error::{Error, Result};
pub mod calculus;
pub mod forms;
pub mod metrics;
pub mod cohomology;
pub mod obstruction;
pub mod numeric;
pub mod dsl;

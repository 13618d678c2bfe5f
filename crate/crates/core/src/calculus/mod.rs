//! Differential operators, contractions and the deformation bracket.

mod contraction;
mod differential;
mod endo;
mod vform;

pub use contraction::SlotRule;
pub use differential::DSquaredReport;
pub use endo::FrameEndo;
pub use vform::{interior, VForm, VFormDisplay};

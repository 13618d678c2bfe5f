//! Character-weighted invariant forms over a coframe.

mod algebra;
mod form;
mod mono;
mod weight;

pub use algebra::{Character, CoframeAlgebra};
pub use form::{Bidegree, CoeffDisplay, Form, FormDisplay};
pub use mono::{basis, subsets, Mono, MAX_DIM};
pub use weight::Weight;

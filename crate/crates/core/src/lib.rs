//! Exact-arithmetic laboratory for the combinatorics of the degree-3 shift
//! locus: elaminations on rational circle data, circle pinching and its
//! censuses, the dynamical and tautological elamination generators, fiber
//! monodromy, quadratic towers, a CAT(0) link-condition checker, and a
//! floating-point polynomial dynamics kernel.

pub mod angle;
pub mod cat0;
pub mod dynlam;
pub mod error;
pub mod leaf;
pub mod monodromy;
pub mod pinch;
pub mod poly;
pub mod render;
pub mod sausage;
pub mod taut;

pub(crate) mod fixed;

pub use angle::{Angle, Height};
pub use error::{Error, Result};
pub use leaf::{chords_cross, leaf_image, validate_elamination, Elamination, Leaf, Violation};

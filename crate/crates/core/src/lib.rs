//! Exact and asymptotic geometry along cylindrical stretch lines of
//! Teichmüller space.
//!
//! * [`numerics`]: sign + log-magnitude scalars for doubly exponential values.
//! * [`halfplane`]: parabolic Moebius maps and their products.
//! * [`cylinder`]: band decompositions, leaf lengths, heights and the
//!   bracket `h' <= h <= l <= h*` on the core length.
//! * [`stretch`]: divergence and asymmetry diagnostics for pairs of rays.

pub mod cylinder;
pub mod error;
pub mod halfplane;
pub mod numerics;
pub mod stretch;

pub use cylinder::{AsymptoticData, BandSpec, CylinderSpec, LengthBracket, MinLeaf};
pub use error::{Error, Result};
pub use halfplane::{BoundaryPoint, MoebiusMap};
pub use numerics::ExtScalar;
pub use stretch::{Classification, DivergenceReport, RaySpec, TransverseCurveData};

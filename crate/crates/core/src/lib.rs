//! Totally geodesic left-invariant unit vector fields on three-dimensional
//! Lie groups with left-invariant metrics.
//!
//! The [`tg`] module evaluates the total-geodesity tensor from first
//! principles (Koszul connection and curvature of the structure constants)
//! and is the oracle against which the closed forms in [`unimodular`] and
//! [`nonunimodular`] are checked. [`contact`] decides the contact-geometric
//! properties of the structure `(A_ξ, ξ, <ξ,·>)`.

pub mod algebra;
pub mod contact;
pub mod exec;
pub mod nonunimodular;
pub mod solutions;
pub mod tables;
pub mod tg;
pub mod unimodular;

pub use algebra::{Connection3, Curvature3, FrameMap, Mat3, MetricLieAlgebra3, Vec3};
pub use solutions::{SolutionFamily, SolutionSet};
pub use tg::{Geometry, TgReport, UnitField};

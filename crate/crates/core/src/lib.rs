//! Numerical toolkit for the filtered (alpha) Euler equations in the plane and
//! outside a small disk.

pub mod banded;
mod error;
pub mod exterior_solver;
pub mod geometry;
pub mod grid;
pub mod initial;
pub mod kernels;
pub mod mode_solver;
pub mod plane_solver;
pub mod radial_exterior;
pub mod record;
pub mod specfun;

pub use error::{Error, Result};
pub use exterior_solver::{Extension, ExteriorSimConfig, PicardConfig};
pub use geometry::{Jacobian, Point2};
pub use grid::RadialGrid;
pub use initial::InitialVorticity;
pub use kernels::FilterParams;
pub use mode_solver::{PolarField, PolarGrid};
pub use plane_solver::{EnvelopeFit, Lattice, ParticleEnsemble, PlaneSimConfig};
pub use record::{Diagnostics, Provenance, RunRecord, Snapshot, SnapshotData};

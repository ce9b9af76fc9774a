//! Spectral tools for the low-Mach limit of capillary compressible fluids on
//! periodic boxes: acoustic propagation, a capillary Navier–Stokes solver, an
//! incompressible Euler reference and a harness measuring convergence rates.

pub mod acoustic;
pub mod cli;
pub mod error;
pub mod euler;
pub mod field;
pub mod functionals;
pub mod grid;
pub mod harness;
pub mod io;
pub mod nsk;
pub mod spectral;
pub mod state;

pub use error::{Error, Result};
pub use field::{ScalarField, Spectrum, VectorField};
pub use functionals::PhysParams;
pub use grid::Grid;
pub use spectral::Spectral;
pub use state::{FluidState, Trajectory};

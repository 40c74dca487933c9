//! Strong-field ionisation toolkit.
//!
//! Everything internal works in Hartree atomic units (ħ = mₑ = e = 1); the
//! polarisation plane is the x–y plane with the major axis along x. The crate
//! provides the analytic laser pulse, static tunnelling-barrier geometry,
//! classical trajectory ensembles with optional semiclassical phases, a 1D/2D
//! split-operator grid solver, Gabor/Husimi phase-space analysis with
//! quantum-seeded trajectory sampling, backward-propagation tunnelling-time
//! extraction, and attoclock offset-angle analysis.

pub mod atom;
pub mod attoclock;
pub mod backprop;
pub mod barrier;
pub mod ensemble;
pub mod error;
pub mod field;
pub mod geom;
pub mod integrator;
pub mod io;
pub mod phase_space;
pub mod pmd;
pub mod rngstream;
pub mod tdse;
pub mod units;

pub use atom::{AtomModel, PotentialKind};
pub use error::SfiError;
pub use field::{Envelope, Helicity, LaserPulse};
pub use geom::Vec2;


//! Ion-mediated interactions between two trapped atoms.
//!
//! A single ion sits between two atoms held in optical tweezers. Because the
//! ion moves much faster than the atoms, its motional eigenvalues act as
//! potentials for the atom pair (Born–Oppenheimer). This crate evaluates
//! those potentials, their harmonic expansion, the resulting phonon modes
//! and stability threshold, the pair's axial ground state and the
//! non-adiabatic gauge connection of the ion states.

pub mod bo;
pub mod cli;
pub mod config;
pub mod constants;
pub mod eigen;
pub mod error;
pub mod expansion;
pub mod gauge;
pub mod model;
pub mod motional;
pub mod output;
pub mod phonons;
pub mod quadrature;

pub use bo::{AtomPairGeometry, IonDisplacement, IonModeIndex, Placement};
pub use error::{Error, Result};
pub use model::{ElectronicState, SystemConfig};

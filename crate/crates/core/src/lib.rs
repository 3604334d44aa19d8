//! Numerical model of a Stern-Gerlach experiment in which the deflecting
//! field belongs to a superconducting flux qubit.
//!
//! A spin-polarised condensate falls past the qubit loop. Each flux well
//! carries its own persistent current and therefore its own field gradient,
//! so the condensate picks up a well-dependent momentum kick and becomes
//! entangled with the flux state. A Hadamard on the qubit followed by a
//! flux measurement leaves the atoms in a two-path superposition whose
//! N-fold coincidence fringes are contracted by a factor of N.
//!
//! Module map:
//!
//! * [`fields`]: loop and dipole magnetostatics, loop inductance.
//! * [`fluxqubit`]: flux Hamiltonian, eigenstates, double-well summary,
//!   logical qubit operations.
//! * [`bec`]: condensate packet, free-fall trajectory, impulse kicks.
//! * [`coupling`]: entangled state, regime classification, Hadamard and
//!   measurement protocol, decoherence budget.
//! * [`interference`]: recombined fringe patterns and the N-fold period law.
//! * [`backaction`]: flux linked by the atoms versus the flux quantum.
//!
//! All quantities are SI.

pub mod backaction;
pub mod bec;
pub mod constants;
pub mod coupling;
mod error;
pub mod exec;
pub mod fields;
pub mod fluxqubit;
pub mod interference;

pub use constants::{PhysicalConstants, CONSTANTS};
pub use error::{Error, Result};
pub use exec::Exec;

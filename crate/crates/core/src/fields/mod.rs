//! Magnetostatics of the qubit loop and of the atomic dipoles.
//!
//! The loop is treated as an ideal circular filament of radius `R` in the
//! `z = 0` plane, centred on the origin. Currents are positive when they
//! circulate anti-clockwise seen from `+z`, so positive current gives a
//! positive on-axis `B_z`.

mod current_loop;
mod dipole;
mod elliptic;
mod inductance;

pub use crate::constants::{PhysicalConstants, CONSTANTS};
pub use current_loop::{
    gradient_flatness_map, gradient_flatness_map_with, loop_field, onaxis_bz, onaxis_dbz_dz,
    onaxis_gradient_extremum, FieldSample, FlatnessMap, GradientSample,
};
pub use dipole::{dipole_bz, dipole_flux_linked};
pub use elliptic::complete_elliptic;
pub use inductance::{loop_self_inductance, LoopGeometry, GMD_RECTANGULAR};

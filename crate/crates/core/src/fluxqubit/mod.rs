//! The flux-qubit circuit: a superconducting loop of inductance `L` closed
//! by one Josephson junction (capacitance `C_j`, critical current `I_c`),
//! biased by an applied flux `Φ_a`.
//!
//! The loop flux `Φ` is the coordinate and `C_j` plays the role of mass:
//!
//! ```text
//! H = −(ħ²/2C_j) ∂²/∂Φ² + (Φ − Φ_a)²/2L + E_j (1 − cos 2πΦ/Φ₀)
//! ```
//!
//! At `Φ_a = Φ₀/2` and `2πL I_c/Φ₀ > 1` the potential is a symmetric double
//! well whose minima carry opposite persistent currents.

mod eigen;
mod params;
mod qubit;
mod tridiag;

pub use eigen::{
    eigenstates, eigenstates_with, find_minima, tunnel_splitting, two_gaussian_summary,
    well_states, DoubleWellSummary, FluxEigenstate, FluxWavefunction, Minima, Parity,
};
pub use params::{persistent_current, potential, FluxGrid, FluxQubitParams};
pub use qubit::{
    hadamard, measure_flux, sample_flux_outcomes, FluxLabel, FluxMeasurement, OutcomeCounts,
    QubitLogicalState,
};
pub(crate) use qubit::{draw_outcome, sample_binary};
pub use tridiag::SymTridiagonal;

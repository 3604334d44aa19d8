//! Condensate and flux qubit together: the two-branch entangled state,
//! coupling regimes, the decoherence budget and the Hadamard plus flux
//! measurement protocol.
//!
//! Each branch is an N-fold product of identical single-atom Gaussians, so
//! N-atom overlaps are carried as `O₁^N` (via its logarithm) and never as
//! explicit tensor products.

mod protocol;
mod regime;
mod state;

pub use protocol::{
    apply_hadamard, hadamard_and_measure, ignore_qubit_mixture, sample_protocol_outcomes,
    trace_protocol, Mixture, PathEntangledBEC, PostHadamardState, ProtocolTrace, TimingBudget,
};
pub use regime::{classify_regime, classify_regime_with, Regime, RegimeReport, RegimeThresholds};
pub use state::{entangle, gaussian_overlap, Branch, EntangledState};

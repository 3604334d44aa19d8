//! Flux that the polarised atoms thread through the loop, compared with the
//! flux quantum.
//!
//! All atoms sit at one point on the loop axis, which gives the largest
//! linked flux. The qubit is taken to be infinitely heavy, so recoil of the
//! loop itself is not modelled.

use serde::Serialize;

use crate::bec::SpinState;
use crate::constants::CONSTANTS;
use crate::error::{Error, Result};
use crate::fields::dipole_flux_linked;

/// Default boundary for a negligible `N Φ_atom / Φ₀`.
pub const NEGLIGIBLE_RATIO: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BackactionReport {
    /// Flux linked by one atom (Wb).
    pub phi_atom: f64,
    pub n_atoms: u64,
    /// `N Φ_atom / Φ₀`.
    pub ratio: f64,
    pub negligible: bool,
}

pub fn backaction_ratio(spin: &SpinState, n_atoms: u64, radius: f64, z0: f64) -> Result<BackactionReport> {
    backaction_ratio_with(spin, n_atoms, radius, z0, NEGLIGIBLE_RATIO)
}

pub fn backaction_ratio_with(
    spin: &SpinState,
    n_atoms: u64,
    radius: f64,
    z0: f64,
    threshold: f64,
) -> Result<BackactionReport> {
    if n_atoms == 0 {
        return Err(Error::Domain("back-action needs at least one atom".into()));
    }
    let phi_atom = dipole_flux_linked(spin, radius, z0)?;
    let ratio = n_atoms as f64 * phi_atom / CONSTANTS.phi0;
    Ok(BackactionReport {
        phi_atom,
        n_atoms,
        ratio,
        negligible: ratio.abs() < threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn single_atom() {
        let s = SpinState::rb87_stretched();
        let r = backaction_ratio(&s, 1, 2.25e-6, 1.25e-6).unwrap();
        assert_eq!(r.ratio, r.phi_atom / CONSTANTS.phi0);
        assert!(backaction_ratio(&s, 0, 2.25e-6, 1.25e-6).is_err());
    }

    #[test]
    fn many_atoms_not_negligible() {
        let s = SpinState::rb87_stretched();
        let few = backaction_ratio(&s, 100_000, 2.25e-6, 1.25e-6).unwrap();
        assert!(few.negligible);
        let lots = backaction_ratio(&s, 100_000_000, 2.25e-6, 1.25e-6).unwrap();
        assert!(!lots.negligible);
        assert_relative_eq!(lots.ratio, 1000.0 * few.ratio, max_relative = 1e-12);
    }
}

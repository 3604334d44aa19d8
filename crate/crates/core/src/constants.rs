use serde::Serialize;

/// Physical constants used throughout the crate (CODATA 2018 exact values
/// where defined).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// Vacuum permeability (T·m/A).
    pub mu0: f64,
    /// Reduced Planck constant (J·s).
    pub hbar: f64,
    /// Planck constant (J·s).
    pub h: f64,
    /// Bohr magneton (J/T).
    pub mu_b: f64,
    /// Elementary charge (C).
    pub e_charge: f64,
    /// Superconducting flux quantum h/2e (Wb).
    pub phi0: f64,
    /// Gravitational acceleration (m/s²).
    pub g_grav: f64,
    /// Mass of a rubidium-87 atom (kg).
    pub m_rb87: f64,
}

const H: f64 = 6.626_070_15e-34;
const E_CHARGE: f64 = 1.602_176_634e-19;
const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

/// The canonical constants instance.
pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    mu0: 1.256_637_062_12e-6,
    hbar: H / (2.0 * std::f64::consts::PI),
    h: H,
    mu_b: 9.274_010_078_3e-24,
    e_charge: E_CHARGE,
    phi0: H / (2.0 * E_CHARGE),
    g_grav: 9.81,
    m_rb87: 86.909_180_527 * ATOMIC_MASS_UNIT,
};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_quantum_is_h_over_2e() {
        let c = CONSTANTS;
        let rel = (c.phi0 - c.h / (2.0 * c.e_charge)).abs() / c.phi0;
        assert!(rel < 1e-12);
        assert!((c.phi0 - 2.0678e-15).abs() / c.phi0 < 1e-4);
    }

    #[test]
    fn rb87_mass() {
        assert!((CONSTANTS.m_rb87 - 1.4431e-25).abs() / 1.4431e-25 < 1e-4);
    }
}

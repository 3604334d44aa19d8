use serde::{Deserialize, Serialize};

use crate::constants::CONSTANTS;
use crate::error::{Error, Result};

/// Hyperfine spin state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinState {
    pub f: i32,
    pub m_f: i32,
    pub g_f: f64,
}

impl SpinState {
    pub fn new(f: i32, m_f: i32, g_f: f64) -> Result<Self> {
        if f < 0 || m_f.abs() > f {
            return Err(Error::Config(format!("need -F <= m_F <= F (F = {f}, m_F = {m_f})")));
        }
        if !g_f.is_finite() {
            return Err(Error::Config("non-finite Lande factor".into()));
        }
        Ok(Self { f, m_f, g_f })
    }

    /// `|F = 2, m_F = +2⟩` of rubidium-87, `g_F = 1/2`.
    pub fn rb87_stretched() -> Self {
        Self { f: 2, m_f: 2, g_f: 0.5 }
    }

    /// `m_F g_F μ_B` (J/T); the potential energy is `+m_F g_F μ_B B`.
    pub fn magnetic_moment(&self) -> f64 {
        self.m_f as f64 * self.g_f * CONSTANTS.mu_b
    }
}

/// Gaussian condensate of `n_atoms` non-interacting atoms.
///
/// Single-atom amplitude `∝ exp(−Σ (r_i − c_i)² / 2σ_i²)`, so the transverse
/// momentum width is `ħ/σ_z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BECPacket {
    pub n_atoms: u64,
    pub sigma: [f64; 3],
    pub center: [f64; 3],
    pub velocity: [f64; 3],
    pub spin: SpinState,
    pub mass_atom: f64,
    /// `ħ / σ_z` (kg·m/s).
    pub dp_z: f64,
}

impl BECPacket {
    pub fn sigma_x(&self) -> f64 {
        self.sigma[0]
    }

    pub fn sigma_z(&self) -> f64 {
        self.sigma[2]
    }

    /// Copy with `p_z` added to the transverse momentum.
    pub fn kicked(&self, p_z: f64) -> Self {
        let mut out = *self;
        out.velocity[2] += p_z / self.mass_atom;
        out
    }

    /// Mean transverse momentum per atom.
    pub fn momentum_z(&self) -> f64 {
        self.mass_atom * self.velocity[2]
    }
}

/// Packet parameters; every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PacketConfig {
    pub n_atoms: u64,
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub sigma_z: f64,
    pub center: [f64; 3],
    pub velocity: [f64; 3],
    pub f: i32,
    pub m_f: i32,
    pub g_f: f64,
    pub mass_atom: f64,
}

impl Default for PacketConfig {
    fn default() -> Self {
        Self {
            n_atoms: 100_000,
            sigma_x: 5.0e-6,
            sigma_y: 1.0e-6,
            sigma_z: 1.0e-6,
            center: [-25.0e-6, 0.0, 0.0],
            velocity: [0.0; 3],
            f: 2,
            m_f: 2,
            g_f: 0.5,
            mass_atom: CONSTANTS.m_rb87,
        }
    }
}

pub fn make_packet(config: &PacketConfig) -> Result<BECPacket> {
    let sigma = [config.sigma_x, config.sigma_y, config.sigma_z];
    if sigma.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::Config(format!("packet widths must be positive, got {sigma:?}")));
    }
    if !(config.mass_atom.is_finite() && config.mass_atom > 0.0) {
        return Err(Error::Config(format!("atom mass must be positive, got {}", config.mass_atom)));
    }
    if config.n_atoms == 0 {
        return Err(Error::Config("packet needs at least one atom".into()));
    }
    if config.center.iter().chain(&config.velocity).any(|v| !v.is_finite()) {
        return Err(Error::Config("non-finite packet centre or velocity".into()));
    }
    let spin = SpinState::new(config.f, config.m_f, config.g_f)?;
    Ok(BECPacket {
        n_atoms: config.n_atoms,
        sigma,
        center: config.center,
        velocity: config.velocity,
        spin,
        mass_atom: config.mass_atom,
        dp_z: CONSTANTS.hbar / config.sigma_z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn defaults() {
        let p = make_packet(&PacketConfig::default()).unwrap();
        assert_relative_eq!(p.dp_z, 1.0546e-28, max_relative = 1e-4);
        assert_eq!(p.dp_z, CONSTANTS.hbar / 1.0e-6);
        assert_eq!(p.sigma, [5e-6, 1e-6, 1e-6]);
        assert_eq!(p.spin, SpinState::rb87_stretched());
    }

    #[test]
    fn wider_packet_smaller_momentum_width() {
        let a = make_packet(&PacketConfig::default()).unwrap();
        let b = make_packet(&PacketConfig { sigma_z: 2e-6, ..Default::default() }).unwrap();
        assert_relative_eq!(b.dp_z, a.dp_z / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn invalid_configs() {
        let bad_spin = PacketConfig { m_f: 3, ..Default::default() };
        assert!(matches!(make_packet(&bad_spin), Err(Error::Config(_))));
        let bad_sigma = PacketConfig { sigma_y: 0.0, ..Default::default() };
        assert!(matches!(make_packet(&bad_sigma), Err(Error::Config(_))));
        let bad_mass = PacketConfig { mass_atom: -1.0, ..Default::default() };
        assert!(matches!(make_packet(&bad_mass), Err(Error::Config(_))));
    }

    #[test]
    fn kick_changes_only_transverse_momentum() {
        let p = make_packet(&PacketConfig::default()).unwrap();
        let k = p.kicked(1e-28);
        assert_relative_eq!(k.momentum_z(), 1e-28, max_relative = 1e-12);
        assert_eq!(k.sigma, p.sigma);
        assert_eq!(k.center, p.center);
    }
}

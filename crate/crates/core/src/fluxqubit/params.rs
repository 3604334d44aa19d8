use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::CONSTANTS;
use crate::error::{ensure_finite, Error, Result};

/// Circuit parameters of the flux qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxQubitParams {
    /// Loop self-inductance (H).
    pub l: f64,
    /// Junction capacitance (F).
    pub c_j: f64,
    /// Junction critical current (A).
    pub i_c: f64,
    /// Applied bias flux (Wb).
    pub phi_a: f64,
}

impl FluxQubitParams {
    pub fn new(l: f64, c_j: f64, i_c: f64, phi_a: f64) -> Result<Self> {
        ensure_finite("flux qubit parameters", &[l, c_j, i_c, phi_a])?;
        if !(l > 0.0 && c_j > 0.0) || i_c < 0.0 {
            return Err(Error::Domain(format!(
                "need L, C_j > 0 and I_c >= 0 (got L = {l}, C_j = {c_j}, I_c = {i_c})"
            )));
        }
        Ok(Self { l, c_j, i_c, phi_a })
    }

    /// 6.44 pH loop, 1 fF junction, `I_c = Φ₀/4L` and half-quantum bias,
    /// which places the well minima at exactly `Φ₀/4` and `3Φ₀/4`.
    pub fn reference() -> Self {
        Self::symmetric(6.44e-12, 1e-15)
    }

    /// Symmetric bias with `I_c = Φ₀/4L`.
    pub fn symmetric(l: f64, c_j: f64) -> Self {
        let phi0 = CONSTANTS.phi0;
        Self {
            l,
            c_j,
            i_c: phi0 / (4.0 * l),
            phi_a: phi0 / 2.0,
        }
    }

    /// Josephson energy `I_c Φ₀ / 2π` (J).
    pub fn e_j(&self) -> f64 {
        self.i_c * CONSTANTS.phi0 / (2.0 * PI)
    }

    /// Screening parameter `2π L I_c / Φ₀`.
    pub fn beta(&self) -> f64 {
        2.0 * PI * self.l * self.i_c / CONSTANTS.phi0
    }

    pub fn is_double_well(&self) -> bool {
        self.beta() > 1.0
    }

    /// Small-oscillation frequency of the uncoupled LC loop, `1/√(L C_j)`.
    pub fn lc_frequency(&self) -> f64 {
        1.0 / (self.l * self.c_j).sqrt()
    }

    /// `dU/dΦ` (J/Wb).
    pub fn potential_slope(&self, phi: f64) -> f64 {
        let phi0 = CONSTANTS.phi0;
        (phi - self.phi_a) / self.l + self.i_c * (2.0 * PI * phi / phi0).sin()
    }

    /// `d²U/dΦ²` (J/Wb²).
    pub fn potential_curvature(&self, phi: f64) -> f64 {
        let phi0 = CONSTANTS.phi0;
        1.0 / self.l + self.i_c * (2.0 * PI / phi0) * (2.0 * PI * phi / phi0).cos()
    }
}

/// Potential energy `(Φ − Φ_a)²/2L + E_j (1 − cos 2πΦ/Φ₀)`.
pub fn potential(params: &FluxQubitParams, phi: f64) -> f64 {
    let d = phi - params.phi_a;
    d * d / (2.0 * params.l) + params.e_j() * (1.0 - (2.0 * PI * phi / CONSTANTS.phi0).cos())
}

/// Loop current `(Φ − Φ_a)/L`; positive is flux-increasing.
pub fn persistent_current(params: &FluxQubitParams, phi: f64) -> f64 {
    (phi - params.phi_a) / params.l
}

/// Uniform flux grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxGrid {
    pub phi_min: f64,
    pub phi_max: f64,
    pub n: usize,
}

impl FluxGrid {
    pub const MIN_POINTS: usize = 128;

    pub fn new(phi_min: f64, phi_max: f64, n: usize) -> Result<Self> {
        ensure_finite("flux grid", &[phi_min, phi_max])?;
        if phi_min >= phi_max || n < Self::MIN_POINTS {
            return Err(Error::Domain(format!(
                "flux grid needs phi_min < phi_max and n >= {} (got [{phi_min:e}, {phi_max:e}], n = {n})",
                Self::MIN_POINTS
            )));
        }
        Ok(Self { phi_min, phi_max, n })
    }

    /// `[−Φ₀/4, 5Φ₀/4]` with 4096 points.
    pub fn reference() -> Self {
        Self::with_points(4096)
    }

    /// `[−Φ₀/4, 5Φ₀/4]` with `n` points.
    pub fn with_points(n: usize) -> Self {
        let phi0 = CONSTANTS.phi0;
        Self::new(-0.25 * phi0, 1.25 * phi0, n).expect("reference grid is valid")
    }

    pub fn spacing(&self) -> f64 {
        (self.phi_max - self.phi_min) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.phi_min + self.spacing() * i as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.point(i))
    }

    /// Index of the grid point nearest to `phi` (clamped to the grid).
    pub fn nearest_index(&self, phi: f64) -> usize {
        let x = ((phi - self.phi_min) / self.spacing()).round();
        x.clamp(0.0, (self.n - 1) as f64) as usize
    }
}

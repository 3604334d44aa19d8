use std::f64::consts::PI;

use crate::bec::SpinState;
use crate::constants::CONSTANTS;
use crate::error::{ensure_finite, Error, Result};

/// `B_z` in the loop plane at `(x, y, 0)` from a point dipole at `(0, 0, z0)`
/// polarised along `z`:
/// `(μ₀ m_F g_F μ_B / 4π)(3z₀²/r⁵ − 1/r³)` with `r² = x² + y² + z₀²`.
pub fn dipole_bz(spin: &SpinState, x: f64, y: f64, z0: f64) -> Result<f64> {
    ensure_finite("dipole position", &[x, y, z0])?;
    let r2 = x * x + y * y + z0 * z0;
    if r2 == 0.0 {
        return Err(Error::Singularity("evaluation at the dipole location".into()));
    }
    let r = r2.sqrt();
    let r3 = r2 * r;
    let prefactor = CONSTANTS.mu0 * spin.magnetic_moment() / (4.0 * PI);
    Ok(prefactor * (3.0 * z0 * z0 / (r3 * r2) - 1.0 / r3))
}

/// Flux of an on-axis dipole through a loop of radius `radius`:
/// `(μ₀ m_F g_F μ_B / 2) R² / (R² + z₀²)^{3/2}`.
pub fn dipole_flux_linked(spin: &SpinState, radius: f64, z0: f64) -> Result<f64> {
    ensure_finite("dipole flux inputs", &[radius, z0])?;
    if radius <= 0.0 || z0 < 0.0 {
        return Err(Error::Domain(format!(
            "need R > 0 and z0 >= 0, got R = {radius}, z0 = {z0}"
        )));
    }
    let s = radius * radius + z0 * z0;
    Ok(CONSTANTS.mu0 * spin.magnetic_moment() / 2.0 * radius * radius / (s * s.sqrt()))
}

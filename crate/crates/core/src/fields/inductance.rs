use serde::{Deserialize, Serialize};

use crate::constants::CONSTANTS;
use crate::error::{ensure_finite, Error, Result};

/// Geometric-mean-distance factor of a rectangular cross-section:
/// `a ≈ 0.2235 (w + t)`.
pub const GMD_RECTANGULAR: f64 = 0.2235;

/// Annular loop of rectangular cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopGeometry {
    pub r_inner: f64,
    pub r_outer: f64,
    pub thickness: f64,
    pub r_mean: f64,
    /// Equivalent wire radius used by the inductance formula.
    pub a_equiv: f64,
}

impl LoopGeometry {
    pub fn new(r_inner: f64, r_outer: f64, thickness: f64) -> Result<Self> {
        ensure_finite("loop geometry", &[r_inner, r_outer, thickness])?;
        if !(r_inner > 0.0 && r_inner < r_outer && thickness > 0.0) {
            return Err(Error::Domain(format!(
                "need 0 < r_inner < r_outer and thickness > 0 (got {r_inner}, {r_outer}, {thickness})"
            )));
        }
        Ok(Self {
            r_inner,
            r_outer,
            thickness,
            r_mean: 0.5 * (r_inner + r_outer),
            a_equiv: GMD_RECTANGULAR * ((r_outer - r_inner) + thickness),
        })
    }

    /// Replace the GMD radius with an explicit wire radius.
    pub fn with_equivalent_radius(mut self, a_equiv: f64) -> Self {
        self.a_equiv = a_equiv;
        self
    }

    /// The 2.0/2.5 µm annulus, 1.0 µm thick, used for the reference estimates.
    pub fn reference() -> Self {
        Self::new(2.0e-6, 2.5e-6, 1.0e-6).expect("reference loop geometry is valid")
    }
}

/// Self-inductance of a thin circular loop, `μ₀ r (ln(8r/a) − 2)`.
pub fn loop_self_inductance(geom: &LoopGeometry) -> Result<f64> {
    ensure_finite("loop geometry", &[geom.r_mean, geom.a_equiv])?;
    if !(geom.a_equiv > 0.0 && geom.a_equiv < geom.r_mean) {
        return Err(Error::Domain(format!(
            "equivalent radius {} must lie in (0, r_mean = {})",
            geom.a_equiv, geom.r_mean
        )));
    }
    Ok(CONSTANTS.mu0 * geom.r_mean * ((8.0 * geom.r_mean / geom.a_equiv).ln() - 2.0))
}

//! Recombined N-fold coincidence fringes of the path-entangled condensate.
//!
//! The two momentum branches are brought back onto a common Gaussian
//! envelope `exp(−x²/2σ²)` and differ only by momenta `∓δp/2`. Detecting
//! all N atoms at the same coordinate `x` gives the density
//!
//! ```text
//! |c₁ ψ₁(x)^N + c₂ ψ₂(x)^N|² = e^{−N x²/σ²} |c₁ e^{−iNδp x/2ħ} + c₂ e^{iNδp x/2ħ}|²
//! ```
//!
//! whose fringe period is `2πħ / (N δp)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::constants::CONSTANTS;
use crate::coupling::{Mixture, PathEntangledBEC};
use crate::error::{Error, Result};

pub fn debroglie_wavelength(mass: f64, speed: f64) -> Result<f64> {
    if !(mass > 0.0 && speed > 0.0) || !mass.is_finite() || !speed.is_finite() {
        return Err(Error::Domain(format!(
            "de Broglie wavelength needs positive mass and speed (m = {mass}, v = {speed})"
        )));
    }
    Ok(CONSTANTS.h / (mass * speed))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FringePattern {
    pub positions: Vec<f64>,
    /// Coincidence density normalised to 1 over `positions` (1/m).
    pub intensity: Vec<f64>,
    /// Fringe period from zero crossings; `None` without fringes.
    pub period: Option<f64>,
    /// Contrast of the envelope-divided density over the central fringes.
    pub visibility: f64,
    pub n_atoms: u64,
    pub delta_p: f64,
    pub sigma: f64,
}

impl FringePattern {
    /// Trapezoid integral of the density.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.positions, &self.intensity)
    }
}

/// Ideal fringe period `2πħ / (N δp)`.
pub fn expected_period(n_atoms: u64, delta_p: f64) -> Option<f64> {
    (delta_p != 0.0).then(|| 2.0 * std::f64::consts::PI * CONSTANTS.hbar / (n_atoms as f64 * delta_p.abs()))
}

struct Geometry {
    n_atoms: u64,
    delta_p: f64,
    sigma: f64,
    positions: Vec<f64>,
}

impl Geometry {
    fn new(n_atoms: u64, delta_p: f64, sigma: f64, n_points: usize) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::Domain("pattern needs at least one atom".into()));
        }
        if !(sigma > 0.0) || !delta_p.is_finite() {
            return Err(Error::Domain(format!("invalid pattern geometry (sigma = {sigma}, delta_p = {delta_p})")));
        }
        if n_points < 3 {
            return Err(Error::Domain("pattern needs at least 3 points".into()));
        }
        let envelope_half = 4.0 * sigma / (n_atoms as f64).sqrt();
        let half = match expected_period(n_atoms, delta_p) {
            Some(p) => envelope_half.min(16.0 * p),
            None => envelope_half,
        };
        let positions = (0..n_points)
            .map(|i| -half + 2.0 * half * i as f64 / (n_points - 1) as f64)
            .collect();
        Ok(Self {
            n_atoms,
            delta_p,
            sigma,
            positions,
        })
    }

    fn envelope(&self, x: f64) -> f64 {
        (-(self.n_atoms as f64) * x * x / (self.sigma * self.sigma)).exp()
    }

    /// Unnormalised density for branch coefficients `c`.
    fn density(&self, c: [Complex64; 2]) -> Vec<f64> {
        let k = self.n_atoms as f64 * self.delta_p / (2.0 * CONSTANTS.hbar);
        self.positions
            .iter()
            .map(|&x| {
                let phase = Complex64::from_polar(1.0, k * x);
                let amp = c[0] * phase.conj() + c[1] * phase;
                self.envelope(x) * amp.norm_sqr()
            })
            .collect()
    }

    fn finish(self, mut intensity: Vec<f64>) -> Result<FringePattern> {
        let total = trapezoid(&self.positions, &intensity);
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::ZeroNorm("fringe pattern integrates to zero".into()));
        }
        intensity.iter_mut().for_each(|v| *v /= total);
        let fringe: Vec<f64> = self
            .positions
            .iter()
            .zip(&intensity)
            .map(|(&x, &v)| v / self.envelope(x))
            .collect();
        let period = if expected_period(self.n_atoms, self.delta_p).is_some() {
            crossing_period(&self.positions, &fringe)
        } else {
            None
        };
        let central = period.unwrap_or(self.sigma / (self.n_atoms as f64).sqrt());
        let (lo, hi) = self
            .positions
            .iter()
            .zip(&fringe)
            .filter(|(x, _)| x.abs() <= central)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, &v)| (lo.min(v), hi.max(v)));
        let visibility = if hi + lo > 0.0 { ((hi - lo) / (hi + lo)).clamp(0.0, 1.0) } else { 0.0 };
        Ok(FringePattern {
            positions: self.positions,
            intensity,
            period,
            visibility,
            n_atoms: self.n_atoms,
            delta_p: self.delta_p,
            sigma: self.sigma,
        })
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum()
}

/// Period from mid-level crossings of the envelope-divided density.
///
/// Crossings are located by linear interpolation over the region where the
/// envelope is not negligible; two crossings make one period.
fn crossing_period(x: &[f64], fringe: &[f64]) -> Option<f64> {
    let lo = fringe.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = fringe.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mean = 0.5 * (lo + hi);
    if !(hi - lo > 1e-6 * mean.abs()) {
        return None;
    }
    let r: Vec<f64> = fringe.iter().map(|v| v - mean).collect();
    let mut crossings = Vec::new();
    for i in 0..r.len() - 1 {
        if r[i] == 0.0 {
            crossings.push(x[i]);
        } else if r[i] * r[i + 1] < 0.0 {
            crossings.push(x[i] + (x[i + 1] - x[i]) * r[i] / (r[i] - r[i + 1]));
        }
    }
    if crossings.len() < 3 {
        return None;
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    Some(2.0 * span / (crossings.len() - 1) as f64)
}

/// N-fold coincidence pattern of the conditional state `pe`.
///
/// Uses `pe`'s coefficients and atom number; `delta_p` and `sigma` describe
/// the recombined branches at the detector.
pub fn recombined_pattern(pe: &PathEntangledBEC, delta_p: f64, sigma: f64, n_points: usize) -> Result<FringePattern> {
    let geom = Geometry::new(pe.n_atoms, delta_p, sigma, n_points)?;
    let intensity = geom.density(pe.coefficients);
    geom.finish(intensity)
}

/// Weighted average of the component patterns of a mixture.
pub fn mixture_pattern(mix: &Mixture, delta_p: f64, sigma: f64, n_points: usize) -> Result<FringePattern> {
    let n_atoms = mix
        .components
        .first()
        .map(|(_, pe)| pe.n_atoms)
        .ok_or_else(|| Error::ZeroNorm("empty mixture".into()))?;
    if mix.components.iter().any(|(_, pe)| pe.n_atoms != n_atoms) {
        return Err(Error::Domain("mixture components differ in atom number".into()));
    }
    let geom = Geometry::new(n_atoms, delta_p, sigma, n_points)?;
    let mut sum = vec![0.0; n_points];
    for (w, pe) in &mix.components {
        let d = geom.density(pe.coefficients);
        let norm = trapezoid(&geom.positions, &d);
        sum.iter_mut().zip(&d).for_each(|(s, v)| *s += w * v / norm);
    }
    geom.finish(sum)
}

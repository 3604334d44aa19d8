use std::f64::consts::PI;

use serde::Serialize;

use super::elliptic::complete_elliptic;
use crate::constants::CONSTANTS;
use crate::error::{ensure_finite, Error, Result};
use crate::exec::Exec;

/// Field of the loop at one point, in cylindrical components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSample {
    /// Radial component (T).
    pub b_rho: f64,
    /// Axial component (T).
    pub b_z: f64,
    /// Axial gradient `∂B_z/∂z` (T/m).
    pub dbz_dz: f64,
}

/// On-axis field of a circular loop, `μ₀ I R² / 2 (R² + z²)^{3/2}`.
pub fn onaxis_bz(current: f64, radius: f64, z: f64) -> Result<f64> {
    check_loop_inputs(current, radius, &[z])?;
    let s = radius * radius + z * z;
    Ok(CONSTANTS.mu0 * current * radius * radius / (2.0 * s * s.sqrt()))
}

/// On-axis gradient `∂B_z/∂z = −(3/2) μ₀ I R² z / (R² + z²)^{5/2}`.
pub fn onaxis_dbz_dz(current: f64, radius: f64, z: f64) -> Result<f64> {
    check_loop_inputs(current, radius, &[z])?;
    let s = radius * radius + z * z;
    Ok(-1.5 * CONSTANTS.mu0 * current * radius * radius * z / (s * s * s.sqrt()))
}

/// Location and value of the on-axis gradient extremum for `z ≥ 0`.
///
/// The closed form puts it at `z = R/2`; this routine finds it with a
/// golden-section search on `|∂B_z/∂z|` so the two can be compared.
pub fn onaxis_gradient_extremum(current: f64, radius: f64) -> Result<(f64, f64)> {
    check_loop_inputs(current, radius, &[])?;
    let objective = |z: f64| -> f64 {
        let s = radius * radius + z * z;
        z / (s * s * s.sqrt())
    };
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, 4.0 * radius);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (objective(c), objective(d));
    while (b - a) > 1e-14 * radius {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    let z = 0.5 * (a + b);
    Ok((z, onaxis_dbz_dz(current, radius, z)?))
}

/// Full off-axis field of an ideal circular loop.
///
/// `B_rho`, `B_z` use the complete elliptic integrals of modulus
/// `k² = 4Rρ / ((R+ρ)² + z²)`. The gradient is a central difference of
/// `B_z` in `z` with step `R·1e-5`.
pub fn loop_field(current: f64, radius: f64, rho: f64, z: f64) -> Result<FieldSample> {
    check_loop_inputs(current, radius, &[rho, z])?;
    if rho < 0.0 {
        return Err(Error::Domain(format!("negative radial offset {rho}")));
    }
    let wire_distance = ((rho - radius).powi(2) + z * z).sqrt();
    if wire_distance <= 1e-12 * radius {
        return Err(Error::Singularity(format!(
            "evaluation on the loop wire (rho = {rho:e}, z = {z:e})"
        )));
    }
    let step = radius * 1e-5;
    let (b_rho, b_z) = field_components(current, radius, rho, z);
    let (_, b_up) = field_components(current, radius, rho, z + step);
    let (_, b_down) = field_components(current, radius, rho, z - step);
    Ok(FieldSample {
        b_rho,
        b_z,
        dbz_dz: (b_up - b_down) / (2.0 * step),
    })
}

/// `(B_rho, B_z)` for a loop; the caller guarantees the point is off the wire.
pub(crate) fn field_components(current: f64, radius: f64, rho: f64, z: f64) -> (f64, f64) {
    let mu0 = CONSTANTS.mu0;
    let r2 = radius * radius;
    let z2 = z * z;
    let x = rho / radius;

    if x < 1e-3 {
        // Near-axis series; avoids the cancellation in the elliptic B_rho.
        let c = mu0 * current * r2 / 2.0;
        let s = r2 + z2;
        let b0 = c / (s * s.sqrt());
        let b0_2 = -3.0 * c * (r2 - 4.0 * z2) / s.powf(3.5);
        let b0_1 = -3.0 * c * z / s.powf(2.5);
        let b0_3 = 15.0 * c * z * (3.0 * r2 - 4.0 * z2) / s.powf(4.5);
        let b0_4 = {
            // d⁴/dz⁴ of c·s^{-3/2}
            45.0 * c * (r2 * r2 - 12.0 * r2 * z2 + 8.0 * z2 * z2) / s.powf(5.5)
        };
        let rho2 = rho * rho;
        let b_rho = -0.5 * rho * b0_1 + rho * rho2 / 16.0 * b0_3;
        let b_z = b0 - rho2 / 4.0 * b0_2 + rho2 * rho2 / 64.0 * b0_4;
        return (b_rho, b_z);
    }

    let sum_sq = (radius + rho).powi(2) + z2;
    let diff_sq = (radius - rho).powi(2) + z2;
    let m = 4.0 * radius * rho / sum_sq;
    let (k, e) = complete_elliptic(m);
    let prefactor = mu0 * current / (2.0 * PI * sum_sq.sqrt());
    let b_z = prefactor * (k + (r2 - rho * rho - z2) / diff_sq * e);
    let b_rho = prefactor * z / rho * (-k + (r2 + rho * rho + z2) / diff_sq * e);
    (b_rho, b_z)
}

fn check_loop_inputs(current: f64, radius: f64, coords: &[f64]) -> Result<()> {
    ensure_finite("loop current", &[current])?;
    ensure_finite("loop coordinates", coords)?;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::Domain(format!("loop radius must be positive, got {radius}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradientSample {
    pub rho: f64,
    pub z: f64,
    pub dbz_dz: f64,
}

/// Gradient sampled over a rectangle in the `(ρ, z)` half-plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatnessMap {
    /// Row-major samples: `z` varies slowest.
    pub samples: Vec<GradientSample>,
    pub n: usize,
    /// Gradient at `(0, z_center)`.
    pub reference: f64,
    /// `max |g/reference − 1|` over the grid; zero when the reference is zero.
    pub max_relative_deviation: f64,
}

/// Map of `∂B_z/∂z` around `(ρ = 0, z = z_center)`.
///
/// The extents are full spans: `ρ ∈ [0, rho_extent/2]` (a disc of diameter
/// `rho_extent` parallel to the loop) and
/// `z ∈ [z_center − z_extent/2, z_center + z_extent/2]`.
pub fn gradient_flatness_map(
    current: f64,
    radius: f64,
    z_center: f64,
    rho_extent: f64,
    z_extent: f64,
    n: usize,
) -> Result<FlatnessMap> {
    gradient_flatness_map_with(Exec::default(), current, radius, z_center, rho_extent, z_extent, n)
}

pub fn gradient_flatness_map_with(
    exec: Exec,
    current: f64,
    radius: f64,
    z_center: f64,
    rho_extent: f64,
    z_extent: f64,
    n: usize,
) -> Result<FlatnessMap> {
    check_loop_inputs(current, radius, &[z_center, rho_extent, z_extent])?;
    if n < 3 {
        return Err(Error::Domain(format!("flatness grid needs n >= 3, got {n}")));
    }
    if rho_extent < 0.0 || z_extent < 0.0 {
        return Err(Error::Domain("negative map extent".into()));
    }
    let rho_max = rho_extent / 2.0;
    let (z_lo, z_hi) = (z_center - z_extent / 2.0, z_center + z_extent / 2.0);
    if rho_max >= radius && z_lo <= 0.0 && z_hi >= 0.0 {
        return Err(Error::Singularity(
            "flatness region contains the loop wire".into(),
        ));
    }
    let lin = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    let samples = exec.try_map_indices(n * n, |idx| {
        let (iz, ir) = (idx / n, idx % n);
        let rho = lin(0.0, rho_max, ir);
        let z = lin(z_lo, z_hi, iz);
        loop_field(current, radius, rho, z).map(|f| GradientSample {
            rho,
            z,
            dbz_dz: f.dbz_dz,
        })
    })?;
    let reference = loop_field(current, radius, 0.0, z_center)?.dbz_dz;
    let max_relative_deviation = if reference == 0.0 {
        0.0
    } else {
        samples
            .iter()
            .map(|s| (s.dbz_dz / reference - 1.0).abs())
            .fold(0.0, f64::max)
    };
    Ok(FlatnessMap {
        samples,
        n,
        reference,
        max_relative_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const R: f64 = 2.25e-6;
    const I: f64 = 80.3e-6;

    #[test]
    fn onaxis_zero_current() {
        assert_eq!(onaxis_bz(0.0, R, 1e-6).unwrap(), 0.0);
    }

    #[test]
    fn onaxis_centre_value_and_parity_in_current() {
        let b = onaxis_bz(I, R, 0.0).unwrap();
        assert_relative_eq!(b, 2.243e-5, max_relative = 1e-3);
        assert_eq!(onaxis_bz(-I, R, 0.0).unwrap(), -b);
    }

    #[test]
    fn onaxis_gradient_values() {
        assert_eq!(onaxis_dbz_dz(I, R, 0.0).unwrap(), 0.0);
        assert_relative_eq!(onaxis_dbz_dz(I, R, 1.25e-6).unwrap(), -8.48, max_relative = 1e-2);
    }

    #[test]
    fn gradient_extremum_at_half_radius() {
        let (z, g) = onaxis_gradient_extremum(I, R).unwrap();
        assert_relative_eq!(z, R / 2.0, max_relative = 1e-6);
        assert!(g < 0.0);
    }

    #[test]
    fn non_finite_and_bad_radius_rejected() {
        assert!(matches!(onaxis_bz(f64::NAN, R, 0.0), Err(Error::Domain(_))));
        assert!(matches!(onaxis_bz(I, 0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(loop_field(I, R, 1e-6, f64::INFINITY), Err(Error::Domain(_))));
    }

    #[test]
    fn axis_limit_matches_closed_form() {
        for &z in &[-3e-6, -1e-7, 0.0, 1.25e-6, 5e-6] {
            let f = loop_field(I, R, 0.0, z).unwrap();
            assert_eq!(f.b_rho, 0.0);
            assert_relative_eq!(f.b_z, onaxis_bz(I, R, z).unwrap(), max_relative = 1e-9);
            let g = onaxis_dbz_dz(I, R, z).unwrap();
            if g != 0.0 {
                assert_relative_eq!(f.dbz_dz, g, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn series_and_elliptic_branches_join() {
        let z = 0.8e-6;
        let below = field_components(I, R, R * 0.999_999e-3, z);
        let above = field_components(I, R, R * 1.000_001e-3, z);
        assert_relative_eq!(below.1, above.1, max_relative = 1e-9);
        assert_relative_eq!(below.0, above.0, max_relative = 1e-5);
    }

    #[test]
    fn mirror_symmetry() {
        let a = loop_field(I, R, 1.3e-6, 0.7e-6).unwrap();
        let b = loop_field(I, R, 1.3e-6, -0.7e-6).unwrap();
        assert_relative_eq!(a.b_z, b.b_z, max_relative = 1e-12);
        assert_relative_eq!(a.b_rho, -b.b_rho, max_relative = 1e-12);
    }

    #[test]
    fn wire_is_singular() {
        assert!(matches!(loop_field(I, R, R, 0.0), Err(Error::Singularity(_))));
    }

    #[test]
    fn flatness_map_zero_current() {
        let map = gradient_flatness_map(0.0, R, 1.25e-6, 2e-6, 1e-6, 5).unwrap();
        assert!(map.samples.iter().all(|s| s.dbz_dz == 0.0));
        assert_eq!(map.max_relative_deviation, 0.0);
    }

    #[test]
    fn flatness_map_three_by_three() {
        let map = gradient_flatness_map(I, R, 1.25e-6, 2e-6, 1e-6, 3).unwrap();
        assert_eq!(map.samples.len(), 9);
        let first = map.samples[0];
        let last = map.samples[8];
        assert_eq!(first.rho, 0.0);
        assert_relative_eq!(first.z, 0.75e-6, max_relative = 1e-12);
        assert_relative_eq!(last.rho, 1e-6);
        assert_relative_eq!(last.z, 1.75e-6);
    }

    #[test]
    fn flatness_map_rejects_wire_and_small_grid() {
        assert!(matches!(
            gradient_flatness_map(I, R, 0.0, 5e-6, 1e-6, 5),
            Err(Error::Singularity(_))
        ));
        assert!(gradient_flatness_map(I, R, 1.25e-6, 2e-6, 1e-6, 2).is_err());
    }

    #[test]
    fn flatness_map_policy_independent() {
        let a = gradient_flatness_map_with(Exec::Sequential, I, R, 1.25e-6, 2e-6, 1e-6, 9).unwrap();
        let b = gradient_flatness_map_with(Exec::Parallel, I, R, 1.25e-6, 2e-6, 1e-6, 9).unwrap();
        assert_eq!(a, b);
    }
}

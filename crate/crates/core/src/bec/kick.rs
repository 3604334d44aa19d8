use serde::Serialize;

use super::packet::{BECPacket, SpinState};
use super::trajectory::{crossing_trajectory, Trajectory};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fields::{loop_field, LoopGeometry};
use crate::fluxqubit::DoubleWellSummary;

/// Momentum kicks for the two flux wells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KickReport {
    /// `⟨p_z⟩_L` per atom (kg·m/s).
    pub p_l: f64,
    /// `⟨p_z⟩_R` per atom (kg·m/s).
    pub p_r: f64,
    /// Packet momentum width before the kick, `ħ/σ_z`.
    pub dp_z: f64,
    /// Kick spread caused by the flux width of each well,
    /// `|p_L| ΔΦ / |Φ_L − Φ_a|`.
    pub kick_spread: f64,
    /// Interaction time (s).
    pub dt: f64,
    /// `∫ ∂B_z/∂z dt` for the left-well current (T·s/m).
    pub gradient_integral_l: f64,
    pub gradient_integral_r: f64,
}

impl KickReport {
    /// `|p_R − p_L|`.
    pub fn separation(&self) -> f64 {
        (self.p_r - self.p_l).abs()
    }

    /// Kicks from a uniform gradient of magnitude `gradient` held for `dt`,
    /// with the sign each well's current gives just above the loop centre.
    pub fn constant_gradient(packet: &BECPacket, summary: &DoubleWellSummary, gradient: f64, dt: f64) -> Self {
        let well_gradient = |current: f64| -current.signum() * gradient.abs();
        let (g_l, g_r) = (well_gradient(summary.i_l), well_gradient(summary.i_r));
        let p_l = constant_gradient_kick(&packet.spin, g_l, dt);
        Self {
            p_l,
            p_r: constant_gradient_kick(&packet.spin, g_r, dt),
            dp_z: packet.dp_z,
            kick_spread: kick_spread(p_l, summary),
            dt,
            gradient_integral_l: g_l * dt,
            gradient_integral_r: g_r * dt,
        }
    }
}

/// `p_z = −m_F g_F μ_B (∂B_z/∂z) Δt`.
pub fn constant_gradient_kick(spin: &SpinState, gradient: f64, dt: f64) -> f64 {
    -spin.magnetic_moment() * gradient * dt
}

fn kick_spread(p_l: f64, summary: &DoubleWellSummary) -> f64 {
    let lever = (summary.phi_l - summary.phi_a).abs();
    if lever == 0.0 {
        0.0
    } else {
        p_l.abs() * summary.delta_phi / lever
    }
}

/// Knobs for the trajectory kick integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KickOptions {
    /// Half-width of the interaction region along `x` (m).
    pub window: f64,
    /// `Δt` counts time where `|∂B_z/∂z|` exceeds this fraction of its
    /// maximum along the path.
    pub threshold_fraction: f64,
    /// Add `σ_x / v_x` to `Δt` for the packet's longitudinal extent.
    pub widen_by_extent: bool,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for KickOptions {
    fn default() -> Self {
        Self {
            window: 25e-6,
            threshold_fraction: 0.05,
            widen_by_extent: true,
            exec: Exec::default(),
        }
    }
}

/// Gradients below this (T/m) along the whole path mean the packet never
/// reached the loop.
const MIN_INTERACTION_GRADIENT: f64 = 1e-6;

pub fn kick_integral(
    packet: &BECPacket,
    trajectory: &Trajectory,
    summary: &DoubleWellSummary,
    loop_geom: &LoopGeometry,
    window: f64,
) -> Result<KickReport> {
    kick_integral_with(
        packet,
        trajectory,
        summary,
        loop_geom,
        &KickOptions { window, ..Default::default() },
    )
}

/// Impulse kicks integrated along the trajectory.
///
/// The gradient is evaluated once per sample for unit current and scaled by
/// each well's persistent current, which is exact because the field is
/// linear in the current.
pub fn kick_integral_with(
    packet: &BECPacket,
    trajectory: &Trajectory,
    summary: &DoubleWellSummary,
    loop_geom: &LoopGeometry,
    options: &KickOptions,
) -> Result<KickReport> {
    let window = options.window;
    if !(window > 0.0) {
        return Err(Error::Domain(format!("interaction window must be positive, got {window}")));
    }
    let inside: Vec<_> = trajectory.samples.iter().filter(|s| s.x.abs() <= window).collect();
    let (x_first, x_last) = match (trajectory.samples.first(), trajectory.samples.last()) {
        (Some(a), Some(b)) => (a.x.min(b.x), a.x.max(b.x)),
        _ => return Err(Error::Domain("empty trajectory".into())),
    };
    let slack = 1e-9 * window;
    if inside.len() < 2 || x_first > -window + slack || x_last < window - slack {
        return Err(Error::Domain(format!(
            "trajectory x-range [{x_first:e}, {x_last:e}] does not cover the window ±{window:e}"
        )));
    }

    let radius = loop_geom.r_mean;
    let unit_gradient = options.exec.try_map_slice(&inside, |s| {
        let rho = (s.x * s.x + s.y * s.y).sqrt();
        loop_field(1.0, radius, rho, s.z).map(|f| f.dbz_dz)
    })?;

    let peak_index = unit_gradient
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let peak = unit_gradient[peak_index].abs();
    let current_scale = summary.i_l.abs().max(summary.i_r.abs());
    if current_scale > 0.0 && peak * current_scale < MIN_INTERACTION_GRADIENT {
        return Err(Error::NoInteraction {
            max_gradient: peak * current_scale,
        });
    }

    let mut unit_integral = 0.0;
    let mut time_above = 0.0;
    let threshold = options.threshold_fraction * peak;
    for (pair, g) in inside.windows(2).zip(unit_gradient.windows(2)) {
        let dt = pair[1].t - pair[0].t;
        unit_integral += 0.5 * dt * (g[0] + g[1]);
        time_above += dt * fraction_above(g[0].abs(), g[1].abs(), threshold);
    }

    let mut interaction_time = time_above;
    if options.widen_by_extent {
        let v_x = inside[peak_index].v_x;
        if v_x > 0.0 {
            interaction_time += packet.sigma_x() / v_x;
        }
    }

    let moment = packet.spin.magnetic_moment();
    let gradient_integral_l = summary.i_l * unit_integral;
    let gradient_integral_r = summary.i_r * unit_integral;
    let p_l = -moment * gradient_integral_l;
    let p_r = -moment * gradient_integral_r;

    let longitudinal = packet.mass_atom * inside[peak_index].v_x.abs();
    if p_l.abs().max(p_r.abs()) > 1e-2 * longitudinal {
        log::warn!(
            "transverse kick {:.3e} is not small against longitudinal momentum {:.3e}; \
             impulse approximation is doubtful",
            p_l.abs().max(p_r.abs()),
            longitudinal
        );
    }

    Ok(KickReport {
        p_l,
        p_r,
        dp_z: packet.dp_z,
        kick_spread: kick_spread(p_l, summary),
        dt: interaction_time,
        gradient_integral_l,
        gradient_integral_r,
    })
}

/// Fraction of a linear segment from `a` to `b` that lies above `threshold`.
fn fraction_above(a: f64, b: f64, threshold: f64) -> f64 {
    match (a > threshold, b > threshold) {
        (true, true) => 1.0,
        (false, false) => 0.0,
        (true, false) => (a - threshold) / (a - b),
        (false, true) => (b - threshold) / (b - a),
    }
}

/// Crossing speed at which the packet just reaches `|p_R − p_L| = Δp_z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdCrossing {
    /// Entry speed along `x` (m/s).
    pub v_x: f64,
    pub report: KickReport,
}

/// Search for the crossing speed where the kick separation equals the
/// packet momentum width.
///
/// The separation scales as `1/v` up to the small gravitational correction,
/// so the iteration `v ← v · ratio(v)` converges in a few steps.
pub fn weak_coupling_threshold(
    packet: &BECPacket,
    summary: &DoubleWellSummary,
    loop_geom: &LoopGeometry,
    z_pass: f64,
    options: &KickOptions,
    n_steps: usize,
) -> Result<ThresholdCrossing> {
    let ratio_at = |v: f64| -> Result<KickReport> {
        let tr = crossing_trajectory(packet, z_pass, v, options.window, n_steps)?;
        kick_integral_with(packet, &tr, summary, loop_geom, options)
    };
    let mut v = 1.0;
    for _ in 0..60 {
        let report = ratio_at(v)?;
        let ratio = report.separation() / report.dp_z;
        if ratio == 0.0 {
            return Err(Error::NoInteraction { max_gradient: 0.0 });
        }
        if (ratio - 1.0).abs() < 1e-10 {
            return Ok(ThresholdCrossing { v_x: v, report });
        }
        v *= ratio;
    }
    Err(Error::Numerical("weak-coupling threshold search did not converge".into()))
}

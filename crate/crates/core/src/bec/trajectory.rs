use serde::Serialize;

use super::packet::BECPacket;
use crate::constants::CONSTANTS;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// Longitudinal velocity `dx/dt`.
    pub v_x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

/// Free fall along `+x` from the packet centre at fixed height `z_pass`.
pub fn freefall_trajectory(
    packet: &BECPacket,
    z_pass: f64,
    v0_x: f64,
    t_span: f64,
    n_steps: usize,
) -> Result<Trajectory> {
    freefall_trajectory_with_gravity(packet, z_pass, v0_x, t_span, n_steps, CONSTANTS.g_grav)
}

pub fn freefall_trajectory_with_gravity(
    packet: &BECPacket,
    z_pass: f64,
    v0_x: f64,
    t_span: f64,
    n_steps: usize,
    g: f64,
) -> Result<Trajectory> {
    if n_steps < 2 {
        return Err(Error::Domain(format!("trajectory needs n_steps >= 2, got {n_steps}")));
    }
    if ![z_pass, v0_x, t_span, g].iter().all(|v| v.is_finite()) || t_span <= 0.0 {
        return Err(Error::Domain("trajectory needs finite inputs and t_span > 0".into()));
    }
    let x0 = packet.center[0];
    let samples = (0..n_steps)
        .map(|i| {
            let t = t_span * i as f64 / (n_steps - 1) as f64;
            TrajectorySample {
                t,
                x: x0 + v0_x * t + 0.5 * g * t * t,
                y: 0.0,
                z: z_pass,
                v_x: v0_x + g * t,
            }
        })
        .collect();
    Ok(Trajectory { samples })
}

/// Trajectory entering at `x = −window` and leaving at `x = +window`.
pub fn crossing_trajectory(
    packet: &BECPacket,
    z_pass: f64,
    v0_x: f64,
    window: f64,
    n_steps: usize,
) -> Result<Trajectory> {
    if !(window > 0.0 && v0_x >= 0.0) {
        return Err(Error::Domain("crossing needs window > 0 and v0_x >= 0".into()));
    }
    let g = CONSTANTS.g_grav;
    let length = 2.0 * window;
    // positive root of g/2 t² + v t − length = 0, written to avoid cancellation
    let t_span = 2.0 * length / (v0_x + (v0_x * v0_x + 2.0 * g * length).sqrt());
    let mut start = *packet;
    start.center[0] = -window;
    freefall_trajectory(&start, z_pass, v0_x, t_span, n_steps)
}

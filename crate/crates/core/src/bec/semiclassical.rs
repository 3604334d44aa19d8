use num_complex::Complex64;
use serde::Serialize;

use super::kick::constant_gradient_kick;
use super::packet::{BECPacket, SpinState};
use crate::error::{Error, Result};

/// One `m_F` component after a uniform-gradient kick.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitBranch {
    pub m_f: i32,
    pub packet: BECPacket,
    pub amplitude: Complex64,
    /// Kick received by this component (kg·m/s).
    pub p_z: f64,
    /// Separated in momentum from every neighbouring component by more than
    /// the packet width `dp_z`.
    pub resolved: bool,
}

/// Classical Stern-Gerlach splitting of a spin superposition in a uniform
/// gradient held for `dt`.
///
/// Branches come back sorted by `m_F`.
pub fn semiclassical_split(
    packet: &BECPacket,
    spin_amplitudes: &[(i32, Complex64)],
    gradient: f64,
    dt: f64,
) -> Result<Vec<SplitBranch>> {
    let norm: f64 = spin_amplitudes.iter().map(|(_, a)| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!("spin amplitudes not normalised (sum |a|² = {norm})")));
    }
    let mut components = spin_amplitudes.to_vec();
    components.sort_by_key(|(m, _)| *m);
    if components.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Domain("repeated m_F in spin amplitudes".into()));
    }

    let mut branches: Vec<SplitBranch> = components
        .iter()
        .map(|&(m_f, amplitude)| {
            let spin = SpinState::new(packet.spin.f, m_f, packet.spin.g_f)?;
            let p_z = constant_gradient_kick(&spin, gradient, dt);
            let mut kicked = packet.kicked(p_z);
            kicked.spin = spin;
            Ok(SplitBranch {
                m_f,
                packet: kicked,
                amplitude,
                p_z,
                resolved: true,
            })
        })
        .collect::<Result<_>>()?;

    let kicks: Vec<f64> = branches.iter().map(|b| b.p_z).collect();
    for (i, b) in branches.iter_mut().enumerate() {
        let separated = |j: usize| (kicks[i] - kicks[j]).abs() > packet.dp_z;
        let left_ok = i == 0 || separated(i - 1);
        let right_ok = i + 1 == kicks.len() || separated(i + 1);
        b.resolved = left_ok && right_ok;
    }
    Ok(branches)
}

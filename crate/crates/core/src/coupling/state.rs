use num_complex::Complex64;
use serde::Serialize;

use crate::bec::{BECPacket, KickReport};
use crate::error::{Error, Result};
use crate::fluxqubit::{FluxLabel, QubitLogicalState};

/// `|⟨ψ_{p₁}|ψ_{p₂}⟩|` for two Gaussian packets of momentum width `dp`
/// whose mean momenta differ by `delta_p`.
pub fn gaussian_overlap(delta_p: f64, dp: f64) -> f64 {
    (-delta_p * delta_p / (4.0 * dp * dp)).exp()
}

/// One flux label together with the packet kicked by that well's current.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Branch {
    pub label: FluxLabel,
    pub packet: BECPacket,
    /// Kick per atom (kg·m/s).
    pub p_z: f64,
}

/// `α_L |Ψ₁⟩|L⟩ + α_R |Ψ₂⟩|R⟩` with `|Ψ_j⟩` the N-atom product of kicked
/// packets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntangledState {
    pub branch_l: Branch,
    pub branch_r: Branch,
    pub qubit: QubitLogicalState,
    pub n_atoms: u64,
    /// `arg α_R − arg α_L` (rad).
    pub phase_lr: f64,
    /// Kick spread is within an order of magnitude of the packet width, so
    /// the two-branch form is only approximate.
    pub degraded: bool,
}

impl EntangledState {
    /// Single-atom branch overlap `⟨ψ_{p_L}|ψ_{p_R}⟩`.
    pub fn single_overlap(&self) -> f64 {
        gaussian_overlap(self.branch_r.p_z - self.branch_l.p_z, self.branch_l.packet.dp_z)
    }

    /// `ln ⟨Ψ₁|Ψ₂⟩ = N ln O₁`.
    pub fn log_overlap_n(&self) -> f64 {
        let delta = self.branch_r.p_z - self.branch_l.p_z;
        let dp = self.branch_l.packet.dp_z;
        -(self.n_atoms as f64) * delta * delta / (4.0 * dp * dp)
    }

    /// N-atom branch overlap `⟨Ψ₁|Ψ₂⟩`.
    pub fn overlap_n(&self) -> f64 {
        self.log_overlap_n().exp()
    }

    pub fn amplitude(&self, label: FluxLabel) -> Complex64 {
        self.qubit.amplitude(label)
    }

    /// Flux labels that carry amplitude.
    pub fn populated_branches(&self) -> Vec<FluxLabel> {
        [FluxLabel::L, FluxLabel::R]
            .into_iter()
            .filter(|&l| self.amplitude(l).norm_sqr() > 0.0)
            .collect()
    }

    /// 1 for a product state (one populated branch, or identical packets),
    /// 2 otherwise.
    pub fn schmidt_rank(&self) -> usize {
        if self.populated_branches().len() < 2 || self.branch_l.p_z == self.branch_r.p_z {
            1
        } else {
            2
        }
    }
}

/// Build the two-branch state from the kicks and the qubit amplitudes.
///
/// The reduction to two branches needs the kick spread from the flux width
/// of each well to be small against the packet momentum width. A spread
/// within a factor of ten marks the state degraded; a spread at or above
/// the width is an error.
pub fn entangle(packet: &BECPacket, kicks: &KickReport, qubit: &QubitLogicalState) -> Result<EntangledState> {
    if kicks.kick_spread >= kicks.dp_z {
        return Err(Error::ApproximationInvalid {
            dp_spread: kicks.kick_spread,
            dp_packet: kicks.dp_z,
        });
    }
    let degraded = kicks.kick_spread >= 0.1 * kicks.dp_z;
    if degraded {
        log::warn!(
            "kick spread {:.3e} is not small against packet width {:.3e}",
            kicks.kick_spread,
            kicks.dp_z
        );
    }
    let branch = |label, p_z| Branch {
        label,
        packet: packet.kicked(p_z),
        p_z,
    };
    let phase_lr = if qubit.alpha_l.norm_sqr() > 0.0 && qubit.alpha_r.norm_sqr() > 0.0 {
        qubit.alpha_r.arg() - qubit.alpha_l.arg()
    } else {
        0.0
    };
    Ok(EntangledState {
        branch_l: branch(FluxLabel::L, kicks.p_l),
        branch_r: branch(FluxLabel::R, kicks.p_r),
        qubit: *qubit,
        n_atoms: packet.n_atoms,
        phase_lr,
        degraded,
    })
}

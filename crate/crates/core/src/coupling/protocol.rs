use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::regime::{classify_regime_with, RegimeReport, RegimeThresholds};
use super::state::{Branch, EntangledState};
use crate::bec::KickReport;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fluxqubit::{draw_outcome, sample_binary};
use crate::fluxqubit::{hadamard, FluxLabel, OutcomeCounts, QubitLogicalState};

/// Time allowance for kick, Hadamard and measurement against the qubit's
/// decoherence time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimingBudget {
    /// Interaction time (s).
    pub dt: f64,
    /// Hadamard duration (s).
    pub t_h: f64,
    /// Measurement duration (s).
    pub t_m: f64,
    /// Decoherence time (s).
    pub t_d: f64,
    /// Smallest acceptable margin.
    pub required: f64,
}

impl Default for TimingBudget {
    fn default() -> Self {
        Self {
            dt: 2e-6,
            t_h: 0.1e-6,
            t_m: 0.1e-6,
            t_d: 1e-3,
            required: 10.0,
        }
    }
}

impl TimingBudget {
    pub fn new(dt: f64, t_h: f64, t_m: f64, t_d: f64) -> Self {
        Self {
            dt,
            t_h,
            t_m,
            t_d,
            ..Default::default()
        }
    }

    /// `t_d / (Δt + t_h + t_m)`.
    pub fn margin(&self) -> f64 {
        self.t_d / (self.dt + self.t_h + self.t_m)
    }

    pub fn satisfied(&self) -> bool {
        self.margin() >= self.required
    }

    pub fn check(&self) -> Result<()> {
        if self.satisfied() {
            Ok(())
        } else {
            Err(Error::DecoherenceBudgetExceeded {
                margin: self.margin(),
                required: self.required,
            })
        }
    }
}

/// Joint state after the Hadamard:
/// `|L⟩ ⊗ (α_L|Ψ₁⟩ + α_R|Ψ₂⟩)/√2 + |R⟩ ⊗ (α_L|Ψ₁⟩ − α_R|Ψ₂⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PostHadamardState {
    pub entangled: EntangledState,
    /// The qubit factor alone after the Hadamard.
    pub qubit: QubitLogicalState,
    /// Coefficients of `(|Ψ₁⟩, |Ψ₂⟩)` conditioned on `|L⟩`.
    pub coeffs_l: [Complex64; 2],
    /// Coefficients of `(|Ψ₁⟩, |Ψ₂⟩)` conditioned on `|R⟩`.
    pub coeffs_r: [Complex64; 2],
    /// `⟨Ψ₁|Ψ₂⟩` for all N atoms.
    pub overlap_n: f64,
    pub p_left: f64,
    pub p_right: f64,
}

impl PostHadamardState {
    pub fn probability(&self, label: FluxLabel) -> f64 {
        match label {
            FluxLabel::L => self.p_left,
            FluxLabel::R => self.p_right,
        }
    }

    fn coeffs(&self, label: FluxLabel) -> [Complex64; 2] {
        match label {
            FluxLabel::L => self.coeffs_l,
            FluxLabel::R => self.coeffs_r,
        }
    }
}

/// `‖c₁|Ψ₁⟩ + c₂|Ψ₂⟩‖²` with real overlap `o`.
fn born_weight(c: [Complex64; 2], o: f64) -> f64 {
    (c[0].norm_sqr() + c[1].norm_sqr() + 2.0 * o * (c[0].conj() * c[1]).re).max(0.0)
}

pub fn apply_hadamard(state: &EntangledState) -> PostHadamardState {
    let a_l = state.qubit.alpha_l * FRAC_1_SQRT_2;
    let a_r = state.qubit.alpha_r * FRAC_1_SQRT_2;
    let coeffs_l = [a_l, a_r];
    let coeffs_r = [a_l, -a_r];
    let overlap_n = state.overlap_n();
    let p_left = born_weight(coeffs_l, overlap_n);
    let p_right = born_weight(coeffs_r, overlap_n);
    PostHadamardState {
        entangled: *state,
        qubit: hadamard(&state.qubit),
        coeffs_l,
        coeffs_r,
        overlap_n,
        p_left,
        p_right,
    }
}

/// Atoms after the flux outcome is known:
/// `(c₁|Ψ₁⟩ + c₂|Ψ₂⟩) / norm`, which is `(|Ψ₁⟩ ± |Ψ₂⟩)/√2` for the
/// symmetric protocol with orthogonal branches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathEntangledBEC {
    /// +1 after outcome L, −1 after outcome R.
    pub sign: i8,
    pub outcome: FluxLabel,
    pub branches: [Branch; 2],
    /// Normalised coefficients of `(|Ψ₁⟩, |Ψ₂⟩)`.
    pub coefficients: [Complex64; 2],
    pub n_atoms: u64,
    pub overlap_n: f64,
    /// Norm of the unnormalised conditional state; `norm²` is the Born
    /// probability of the outcome, `½(1 ± O^N)` for the symmetric protocol.
    pub norm: f64,
}

impl PathEntangledBEC {
    /// Both momentum branches present and distinguishable.
    pub fn is_superposition(&self) -> bool {
        self.coefficients.iter().all(|c| c.norm_sqr() > 0.0) && self.branches[0].p_z != self.branches[1].p_z
    }

    /// `|p₂ − p₁|`.
    pub fn momentum_separation(&self) -> f64 {
        (self.branches[1].p_z - self.branches[0].p_z).abs()
    }
}

fn collapse(post: &PostHadamardState, outcome: FluxLabel) -> Result<PathEntangledBEC> {
    let weight = post.probability(outcome);
    if weight <= 0.0 {
        return Err(Error::ZeroNorm(format!("outcome {outcome:?} has zero probability")));
    }
    let norm = weight.sqrt();
    let c = post.coeffs(outcome);
    let e = &post.entangled;
    Ok(PathEntangledBEC {
        sign: match outcome {
            FluxLabel::L => 1,
            FluxLabel::R => -1,
        },
        outcome,
        branches: [e.branch_l, e.branch_r],
        coefficients: [c[0] / norm, c[1] / norm],
        n_atoms: e.n_atoms,
        overlap_n: post.overlap_n,
        norm,
    })
}

/// Hadamard on the qubit, then one seeded flux measurement.
pub fn hadamard_and_measure(state: &EntangledState, budget: &TimingBudget, rng_seed: u64) -> Result<PathEntangledBEC> {
    budget.check()?;
    let post = apply_hadamard(state);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let outcome = draw_outcome(&mut rng, post.p_left, post.p_right);
    collapse(&post, outcome)
}

/// Outcome statistics of `trials` independent protocol runs.
pub fn sample_protocol_outcomes(
    state: &EntangledState,
    budget: &TimingBudget,
    seed: u64,
    trials: usize,
    exec: Exec,
) -> Result<OutcomeCounts> {
    budget.check()?;
    let post = apply_hadamard(state);
    Ok(sample_binary(post.p_left, post.p_right, seed, trials, exec))
}

/// Atom state when the flux outcome is discarded: the ± conditional states
/// with their Born weights. Components of zero weight are dropped.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mixture {
    pub components: Vec<(f64, PathEntangledBEC)>,
}

impl Mixture {
    pub fn total_weight(&self) -> f64 {
        self.components.iter().map(|(w, _)| w).sum()
    }
}

pub fn ignore_qubit_mixture(post: &PostHadamardState) -> Mixture {
    let total = post.p_left + post.p_right;
    let components = [FluxLabel::L, FluxLabel::R]
        .into_iter()
        .filter_map(|label| {
            let w = post.probability(label) / total;
            if w > 0.0 {
                collapse(post, label).ok().map(|pe| (w, pe))
            } else {
                None
            }
        })
        .collect();
    Mixture { components }
}

/// Structured record of one protocol run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolTrace {
    pub kicks: KickReport,
    pub regime: RegimeReport,
    pub budget: TimingBudget,
    pub budget_margin: f64,
    pub degraded: bool,
    pub single_overlap: f64,
    pub overlap_n: f64,
    /// Qubit amplitudes after the Hadamard, `[re_L, im_L, re_R, im_R]`.
    pub hadamard_amplitudes: [f64; 4],
    pub p_left: f64,
    pub p_right: f64,
    pub seed: u64,
    pub outcome: FluxLabel,
    pub sign: i8,
    pub collapse_norm: f64,
    /// `[re₁, im₁, re₂, im₂]` of the normalised conditional state.
    pub coefficients: [f64; 4],
}

/// Entangled state through regime classification, Hadamard and
/// measurement, recorded as a trace.
pub fn trace_protocol(
    state: &EntangledState,
    kicks: &KickReport,
    thresholds: &RegimeThresholds,
    budget: &TimingBudget,
    rng_seed: u64,
) -> Result<(ProtocolTrace, PathEntangledBEC)> {
    let regime = classify_regime_with(kicks, thresholds);
    let pe = hadamard_and_measure(state, budget, rng_seed)?;
    let post = apply_hadamard(state);
    let q = post.qubit;
    let c = pe.coefficients;
    let trace = ProtocolTrace {
        kicks: *kicks,
        regime,
        budget: *budget,
        budget_margin: budget.margin(),
        degraded: state.degraded,
        single_overlap: state.single_overlap(),
        overlap_n: post.overlap_n,
        hadamard_amplitudes: [q.alpha_l.re, q.alpha_l.im, q.alpha_r.re, q.alpha_r.im],
        p_left: post.p_left,
        p_right: post.p_right,
        seed: rng_seed,
        outcome: pe.outcome,
        sign: pe.sign,
        collapse_norm: pe.norm,
        coefficients: [c[0].re, c[0].im, c[1].re, c[1].im],
    };
    Ok((trace, pe))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bec::{make_packet, PacketConfig};
    use crate::coupling::entangle;
    use approx::assert_relative_eq;

    fn state(p: f64, n: u64, qubit: QubitLogicalState) -> EntangledState {
        let packet = make_packet(&PacketConfig {
            n_atoms: n,
            ..Default::default()
        })
        .unwrap();
        let kicks = KickReport {
            p_l: -p,
            p_r: p,
            dp_z: packet.dp_z,
            kick_spread: 0.0,
            dt: 2e-6,
            gradient_integral_l: 0.0,
            gradient_integral_r: 0.0,
        };
        entangle(&packet, &kicks, &qubit).unwrap()
    }

    #[test]
    fn budget_margin() {
        let b = TimingBudget::new(2e-6, 0.1e-6, 0.1e-6, 10e-6);
        assert_relative_eq!(b.margin(), 10.0 / 2.2, max_relative = 1e-12);
        assert!(!b.satisfied());
        let s = state(1e-27, 1, QubitLogicalState::ground());
        assert!(matches!(
            hadamard_and_measure(&s, &b, 1),
            Err(Error::DecoherenceBudgetExceeded { .. })
        ));
    }

    #[test]
    fn born_totals() {
        for (p, n) in [(0.0, 1), (3e-29, 1), (3e-29, 30), (1e-27, 100_000)] {
            let post = apply_hadamard(&state(p, n, QubitLogicalState::ground()));
            assert!((post.p_left + post.p_right - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_branches_always_left() {
        let s = state(0.0, 1000, QubitLogicalState::ground());
        let post = apply_hadamard(&s);
        assert_eq!(post.p_right, 0.0);
        for seed in 0..100 {
            assert_eq!(hadamard_and_measure(&s, &TimingBudget::default(), seed).unwrap().outcome, FluxLabel::L);
        }
        let mix = ignore_qubit_mixture(&post);
        assert_eq!(mix.components.len(), 1);
    }

    #[test]
    fn orthogonal_branches_collapse_to_noon() {
        let s = state(1e-27, 100_000, QubitLogicalState::ground());
        let post = apply_hadamard(&s);
        assert_eq!(post.overlap_n, 0.0);
        let mix = ignore_qubit_mixture(&post);
        assert_eq!(mix.components.len(), 2);
        assert_relative_eq!(mix.components[0].0, 0.5, max_relative = 1e-12);
        assert_relative_eq!(mix.total_weight(), 1.0, max_relative = 1e-12);
        let minus = &mix.components[1].1;
        assert_eq!(minus.sign, -1);
        assert_relative_eq!(minus.coefficients[0].re, FRAC_1_SQRT_2, max_relative = 1e-12);
        assert_relative_eq!(minus.coefficients[1].re, -FRAC_1_SQRT_2, max_relative = 1e-12);
        assert!(minus.is_superposition());
    }

    #[test]
    fn collapse_norm_squared_is_born_weight() {
        let s = state(4e-29, 3, QubitLogicalState::ground());
        let o = s.overlap_n();
        assert!(o > 0.1 && o < 0.9);
        let post = apply_hadamard(&s);
        let mix = ignore_qubit_mixture(&post);
        assert_relative_eq!(mix.components[0].1.norm.powi(2), 0.5 * (1.0 + o), max_relative = 1e-12);
        assert_relative_eq!(mix.components[1].1.norm.powi(2), 0.5 * (1.0 - o), max_relative = 1e-12);
    }

    #[test]
    fn definite_input_has_no_superposition() {
        let s = state(1e-27, 100, QubitLogicalState::left());
        for seed in 0..20 {
            let pe = hadamard_and_measure(&s, &TimingBudget::default(), seed).unwrap();
            assert!(!pe.is_superposition());
            assert_relative_eq!(pe.coefficients[0].norm(), 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn seeded_trace_reproducible() {
        let s = state(1e-27, 100, QubitLogicalState::ground());
        let kicks = KickReport {
            p_l: -1e-27,
            p_r: 1e-27,
            dp_z: s.branch_l.packet.dp_z,
            kick_spread: 0.0,
            dt: 2e-6,
            gradient_integral_l: 0.0,
            gradient_integral_r: 0.0,
        };
        let b = TimingBudget::default();
        let a = trace_protocol(&s, &kicks, &RegimeThresholds::default(), &b, 42).unwrap();
        let c = trace_protocol(&s, &kicks, &RegimeThresholds::default(), &b, 42).unwrap();
        assert_eq!(a, c);
    }
}

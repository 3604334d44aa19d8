use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Which flux well.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FluxLabel {
    L,
    R,
}

/// Qubit state in the two-well basis `{|Φ⟩_L, |Φ⟩_R}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitLogicalState {
    pub alpha_l: Complex64,
    pub alpha_r: Complex64,
}

impl QubitLogicalState {
    pub fn new(alpha_l: Complex64, alpha_r: Complex64) -> Result<Self> {
        let norm = alpha_l.norm_sqr() + alpha_r.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("qubit state not normalised (|a|² = {norm})")));
        }
        Ok(Self { alpha_l, alpha_r })
    }

    pub fn from_real(alpha_l: f64, alpha_r: f64) -> Result<Self> {
        Self::new(Complex64::new(alpha_l, 0.0), Complex64::new(alpha_r, 0.0))
    }

    /// Symmetric double-well ground state `(|L⟩ + |R⟩)/√2`.
    pub fn ground() -> Self {
        let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self { alpha_l: a, alpha_r: a }
    }

    pub fn left() -> Self {
        Self {
            alpha_l: Complex64::new(1.0, 0.0),
            alpha_r: Complex64::new(0.0, 0.0),
        }
    }

    pub fn right() -> Self {
        Self {
            alpha_l: Complex64::new(0.0, 0.0),
            alpha_r: Complex64::new(1.0, 0.0),
        }
    }

    pub fn amplitude(&self, label: FluxLabel) -> Complex64 {
        match label {
            FluxLabel::L => self.alpha_l,
            FluxLabel::R => self.alpha_r,
        }
    }

    pub fn probability(&self, label: FluxLabel) -> f64 {
        self.amplitude(label).norm_sqr()
    }

    pub fn norm_squared(&self) -> f64 {
        self.alpha_l.norm_sqr() + self.alpha_r.norm_sqr()
    }
}

/// `|L⟩ ↦ (|L⟩ + |R⟩)/√2`, `|R⟩ ↦ (|L⟩ − |R⟩)/√2`.
pub fn hadamard(state: &QubitLogicalState) -> QubitLogicalState {
    QubitLogicalState {
        alpha_l: (state.alpha_l + state.alpha_r) * FRAC_1_SQRT_2,
        alpha_r: (state.alpha_l - state.alpha_r) * FRAC_1_SQRT_2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxMeasurement {
    pub outcome: FluxLabel,
    /// Born probability of the observed outcome.
    pub probability: f64,
    pub p_left: f64,
    pub p_right: f64,
}

/// Projective measurement in the flux basis with a seeded generator.
pub fn measure_flux(state: &QubitLogicalState, rng_seed: u64) -> FluxMeasurement {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let p_left = state.probability(FluxLabel::L);
    let p_right = state.probability(FluxLabel::R);
    let outcome = draw_outcome(&mut rng, p_left, p_right);
    FluxMeasurement {
        outcome,
        probability: match outcome {
            FluxLabel::L => p_left,
            FluxLabel::R => p_right,
        },
        p_left,
        p_right,
    }
}

pub(crate) fn draw_outcome(rng: &mut impl Rng, p_left: f64, p_right: f64) -> FluxLabel {
    let u: f64 = rng.random();
    if u * (p_left + p_right) < p_left {
        FluxLabel::L
    } else {
        FluxLabel::R
    }
}

/// Trials per independently seeded block in the Monte Carlo samplers.
pub(crate) const SAMPLE_BLOCK: usize = 4096;

/// Generator for block `block` of a run with seed `seed`. Blocks are seeded
/// independently, so results do not depend on how blocks are scheduled.
pub(crate) fn block_rng(seed: u64, block: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64 + 1);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OutcomeCounts {
    pub left: u64,
    pub right: u64,
}

impl OutcomeCounts {
    pub fn total(&self) -> u64 {
        self.left + self.right
    }

    pub fn left_fraction(&self) -> f64 {
        self.left as f64 / self.total() as f64
    }
}

/// Repeat the flux measurement `trials` times.
pub fn sample_flux_outcomes(state: &QubitLogicalState, seed: u64, trials: usize, exec: Exec) -> OutcomeCounts {
    let p_left = state.probability(FluxLabel::L);
    let p_right = state.probability(FluxLabel::R);
    sample_binary(p_left, p_right, seed, trials, exec)
}

pub(crate) fn sample_binary(p_left: f64, p_right: f64, seed: u64, trials: usize, exec: Exec) -> OutcomeCounts {
    let blocks = trials.div_ceil(SAMPLE_BLOCK);
    let lefts = exec.map_indices(blocks, |b| {
        let mut rng = block_rng(seed, b);
        let len = SAMPLE_BLOCK.min(trials - b * SAMPLE_BLOCK);
        (0..len)
            .filter(|_| draw_outcome(&mut rng, p_left, p_right) == FluxLabel::L)
            .count() as u64
    });
    let left = lefts.iter().sum();
    OutcomeCounts {
        left,
        right: trials as u64 - left,
    }
}

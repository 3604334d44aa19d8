mod common;

use approx::assert_relative_eq;
use common::oracle;
use proptest::prelude::*;
use qsg_core::backaction::backaction_ratio;
use qsg_core::bec::{make_packet, KickReport, PacketConfig, SpinState};
use qsg_core::coupling::{apply_hadamard, entangle, ignore_qubit_mixture, Mixture};
use qsg_core::fields::dipole_flux_linked;
use qsg_core::fluxqubit::QubitLogicalState;
use qsg_core::interference::{debroglie_wavelength, mixture_pattern, recombined_pattern};

const DP: f64 = 1.52e-27;
const SIGMA: f64 = 1e-6;

fn mixture(n: u64, delta_p: f64) -> Mixture {
    let packet = make_packet(&PacketConfig {
        n_atoms: n,
        ..Default::default()
    })
    .unwrap();
    let kicks = KickReport {
        p_l: -delta_p / 2.0,
        p_r: delta_p / 2.0,
        dp_z: packet.dp_z,
        kick_spread: 0.0,
        dt: 20e-6,
        gradient_integral_l: 0.0,
        gradient_integral_r: 0.0,
    };
    let e = entangle(&packet, &kicks, &QubitLogicalState::ground()).unwrap();
    ignore_qubit_mixture(&apply_hadamard(&e))
}

#[test]
fn wavelength_reference() {
    let l = debroglie_wavelength(oracle::M_RB87, 4.5).unwrap();
    assert_relative_eq!(l, oracle::H_PLANCK / (oracle::M_RB87 * 4.5), max_relative = 1e-12);
    assert_relative_eq!(l, 1.0204e-9, max_relative = 1e-3);
    assert_relative_eq!(debroglie_wavelength(oracle::M_RB87, 9.0).unwrap(), l / 2.0, max_relative = 1e-15);
}

#[test]
fn period_law() {
    let single = recombined_pattern(&mixture(1, DP).components[0].1, DP, SIGMA, 4001).unwrap();
    let p1 = single.period.unwrap();
    assert_relative_eq!(p1, 2.0 * std::f64::consts::PI * oracle::HBAR / DP, max_relative = 0.01);
    for n in [2u64, 5, 10, 50] {
        let pat = recombined_pattern(&mixture(n, DP).components[0].1, DP, SIGMA, 4001).unwrap();
        let expected = 2.0 * std::f64::consts::PI * oracle::HBAR / (n as f64 * DP);
        assert_relative_eq!(pat.period.unwrap(), expected, max_relative = 0.01);
        assert_relative_eq!(pat.period.unwrap() / p1, 1.0 / n as f64, max_relative = 0.01);
        assert_relative_eq!(pat.integral(), 1.0, max_relative = 1e-6);
        assert!(pat.intensity.iter().all(|v| *v >= 0.0));
    }
}

#[test]
fn visibility_pure_vs_mixture() {
    for n in [1u64, 10] {
        let mix = mixture(n, DP);
        for (_, pe) in &mix.components {
            assert!(recombined_pattern(pe, DP, SIGMA, 4001).unwrap().visibility > 0.95);
        }
        let m = mixture_pattern(&mix, DP, SIGMA, 4001).unwrap();
        assert!(m.visibility < 0.02);
    }
}

#[test]
fn mixture_of_one_is_the_pure_pattern() {
    let mut mix = mixture(3, DP);
    mix.components.truncate(1);
    mix.components[0].0 = 1.0;
    let a = mixture_pattern(&mix, DP, SIGMA, 1001).unwrap();
    let b = recombined_pattern(&mix.components[0].1, DP, SIGMA, 1001).unwrap();
    for (x, y) in a.intensity.iter().zip(&b.intensity) {
        assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
    }
}

#[test]
fn envelope_limit() {
    let n = 4;
    let pe = mixture(n, DP).components[0].1;
    let mut last = f64::INFINITY;
    for dp in [1e-29, 1e-31, 1e-33] {
        let pat = recombined_pattern(&pe, dp, SIGMA, 801).unwrap();
        let env: Vec<f64> = pat.positions.iter().map(|x| (-(n as f64) * x * x / (SIGMA * SIGMA)).exp()).collect();
        let norm = oracle::trapezoid(&pat.positions, &env);
        let dist = pat
            .intensity
            .iter()
            .zip(&env)
            .map(|(a, b)| (a - b / norm).abs())
            .fold(0.0, f64::max);
        assert!(dist < last);
        last = dist;
    }
    assert!(last < 1e-6 * (n as f64).sqrt() / SIGMA);
}

#[test]
fn backaction_reference() {
    let spin = SpinState::rb87_stretched();
    let r = backaction_ratio(&spin, 100_000, 2.25e-6, 1.25e-6).unwrap();
    assert_relative_eq!(r.ratio, 8.4e-5, max_relative = 0.05);
    assert!(r.negligible);
    let from_quadrature = 100_000.0 * oracle::dipole_disk_flux(oracle::MU_B, 2.25e-6, 1.25e-6) / oracle::PHI0;
    assert_relative_eq!(r.ratio, from_quadrature, max_relative = 1e-3);
    assert!(!backaction_ratio(&spin, 100_000_000, 2.25e-6, 1.25e-6).unwrap().negligible);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn period_law_any_n(n in 1u64..60, scale in 0.5f64..2.0) {
        let dp = DP * scale;
        let pe = mixture(n, dp).components[0].1;
        let pat = recombined_pattern(&pe, dp, SIGMA, 4001).unwrap();
        let expected = 2.0 * std::f64::consts::PI * oracle::HBAR / (n as f64 * dp);
        prop_assert!((pat.period.unwrap() / expected - 1.0).abs() < 0.01);
        prop_assert!((0.0..=1.0).contains(&pat.visibility));
    }

    #[test]
    fn backaction_scaling(n in 1u64..1_000_000_000, z0 in 0.1e-6f64..5e-6, dz in 0.01e-6f64..1e-6, m_f in 1i32..=2) {
        let spin = SpinState::new(2, m_f, 0.5).unwrap();
        let a = backaction_ratio(&spin, n, 2.25e-6, z0).unwrap();
        let b = backaction_ratio(&spin, n, 2.25e-6, z0 + dz).unwrap();
        prop_assert!(b.ratio < a.ratio);
        let single = dipole_flux_linked(&spin, 2.25e-6, z0).unwrap() / oracle::PHI0;
        prop_assert!((a.ratio - n as f64 * single).abs() <= 1e-12 * a.ratio);
        let doubled = backaction_ratio(&spin, 2 * n, 2.25e-6, z0).unwrap();
        prop_assert!((doubled.ratio - 2.0 * a.ratio).abs() <= 1e-12 * doubled.ratio);
    }
}

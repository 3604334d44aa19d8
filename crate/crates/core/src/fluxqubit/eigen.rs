use num_complex::Complex64;
use serde::Serialize;

use super::params::{persistent_current, potential, FluxGrid, FluxQubitParams};
use super::tridiag::SymTridiagonal;
use crate::constants::CONSTANTS;
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Flux-basis wavefunction sampled on a uniform grid (units 1/√Wb).
#[derive(Debug, Clone, PartialEq)]
pub struct FluxWavefunction {
    pub grid: FluxGrid,
    pub amplitudes: Vec<Complex64>,
}

impl FluxWavefunction {
    /// Normalise real samples so that `Σ|c|² h = 1`.
    pub fn from_real(grid: FluxGrid, values: &[f64]) -> Result<Self> {
        let h = grid.spacing();
        let norm = (values.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::ZeroNorm("flux wavefunction".into()));
        }
        Ok(Self {
            grid,
            amplitudes: values.iter().map(|&v| Complex64::new(v / norm, 0.0)).collect(),
        })
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    /// `⟨self|other⟩` under the grid measure.
    pub fn inner(&self, other: &FluxWavefunction) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.grid.spacing()
    }

    pub fn mean_flux(&self) -> f64 {
        let h = self.grid.spacing();
        self.grid
            .points()
            .zip(&self.amplitudes)
            .map(|(phi, c)| phi * c.norm_sqr())
            .sum::<f64>()
            * h
            / self.norm_squared()
    }

    /// `max(|c_0|, |c_{n−1}|) / max |c|`.
    pub fn boundary_ratio(&self) -> f64 {
        let max = self.amplitudes.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let edge = self.amplitudes[0].norm().max(self.amplitudes[self.amplitudes.len() - 1].norm());
        if max == 0.0 {
            0.0
        } else {
            edge / max
        }
    }

    /// Largest deviation from even (`c_i = c_{n−1−i}`) or odd reflection
    /// symmetry about the grid centre, relative to the peak amplitude.
    pub fn reflection_error(&self, parity: Parity) -> f64 {
        let n = self.amplitudes.len();
        let max = self.amplitudes.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let sign = match parity {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        };
        (0..n)
            .map(|i| (self.amplitudes[i] - sign * self.amplitudes[n - 1 - i]).norm())
            .fold(0.0, f64::max)
            / max
    }

    fn real_parts(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.re).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluxEigenstate {
    /// Energy (J).
    pub energy: f64,
    pub wavefunction: FluxWavefunction,
    /// Reflection parity about the grid centre, when the potential has that
    /// symmetry.
    pub parity: Option<Parity>,
}

/// Finite-difference Hamiltonian in units of the hopping energy
/// `t = ħ²/(2 C_j h²)`: diagonal `2 + U_i/t`, off-diagonal `−1`.
struct Discretization {
    hopping: f64,
    matrix: SymTridiagonal,
}

fn discretize(params: &FluxQubitParams, grid: &FluxGrid) -> Result<Discretization> {
    let h = grid.spacing();
    let hbar = CONSTANTS.hbar;
    let hopping = hbar * hbar / (2.0 * params.c_j * h * h);
    let diag = grid.points().map(|phi| 2.0 + potential(params, phi) / hopping).collect();
    let matrix = SymTridiagonal::new(diag, vec![-1.0; grid.n - 1])?;
    Ok(Discretization { hopping, matrix })
}

fn is_reflection_symmetric(diag: &[f64]) -> bool {
    let n = diag.len();
    let scale = diag.iter().map(|d| (d - 2.0).abs()).fold(0.0, f64::max);
    (0..n / 2).all(|i| ((diag[i] - 2.0) - (diag[n - 1 - i] - 2.0)).abs() <= 1e-10 * scale.max(1e-300))
}

/// Even and odd half problems of a reflection-symmetric matrix.
fn half_problems(full: &SymTridiagonal) -> Result<(SymTridiagonal, SymTridiagonal)> {
    let n = full.len();
    if n.is_multiple_of(2) {
        let m = n / 2;
        let coupling = full.off[m - 1];
        let mut even_diag = full.diag[..m].to_vec();
        let mut odd_diag = even_diag.clone();
        even_diag[m - 1] += coupling;
        odd_diag[m - 1] -= coupling;
        let off = full.off[..m - 1].to_vec();
        Ok((
            SymTridiagonal::new(even_diag, off.clone())?,
            SymTridiagonal::new(odd_diag, off)?,
        ))
    } else {
        let c = (n - 1) / 2;
        let mut even_off = full.off[..c].to_vec();
        even_off[c - 1] *= std::f64::consts::SQRT_2;
        let even = SymTridiagonal::new(full.diag[..=c].to_vec(), even_off)?;
        let odd = SymTridiagonal::new(full.diag[..c].to_vec(), full.off[..c - 1].to_vec())?;
        Ok((even, odd))
    }
}

fn expand_half(half: &[f64], parity: Parity, n: usize) -> Vec<f64> {
    let sign = match parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    let mut full = vec![0.0; n];
    let mirrored = n / 2;
    for i in 0..mirrored {
        full[i] = half[i];
        full[n - 1 - i] = sign * half[i];
    }
    if n % 2 == 1 && parity == Parity::Even {
        full[mirrored] = std::f64::consts::SQRT_2 * half[mirrored];
    }
    full
}

/// Flip the sign so the first significant lobe from the left is positive.
fn fix_sign(v: &mut [f64]) {
    let max = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-3 * max) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Lowest `k` eigenstates of the flux Hamiltonian on `grid`.
pub fn eigenstates(params: &FluxQubitParams, grid: &FluxGrid, k: usize) -> Result<Vec<FluxEigenstate>> {
    eigenstates_with(Exec::default(), params, grid, k)
}

pub fn eigenstates_with(
    exec: Exec,
    params: &FluxQubitParams,
    grid: &FluxGrid,
    k: usize,
) -> Result<Vec<FluxEigenstate>> {
    if k < 2 {
        return Err(Error::Domain(format!("need at least two eigenstates, asked for {k}")));
    }
    let phi0 = CONSTANTS.phi0;
    let slack = 1e-9 * phi0;
    if grid.phi_min > params.phi_a - 0.5 * phi0 + slack || grid.phi_max < params.phi_a + 0.5 * phi0 - slack {
        return Err(Error::Domain(format!(
            "grid [{:e}, {:e}] must span Phi_a ± Phi0/2",
            grid.phi_min, grid.phi_max
        )));
    }
    let disc = discretize(params, grid)?;
    let n = grid.n;

    let mut raw: Vec<(f64, Vec<f64>, Option<Parity>)> = if is_reflection_symmetric(&disc.matrix.diag) {
        let (even, odd) = half_problems(&disc.matrix)?;
        let mut both: Vec<_> = even
            .lowest_eigenpairs(k, exec)
            .into_iter()
            .map(|(l, v)| (l, expand_half(&v, Parity::Even, n), Some(Parity::Even)))
            .chain(
                odd.lowest_eigenpairs(k, exec)
                    .into_iter()
                    .map(|(l, v)| (l, expand_half(&v, Parity::Odd, n), Some(Parity::Odd))),
            )
            .collect();
        both.sort_by(|a, b| a.0.total_cmp(&b.0));
        both.truncate(k);
        both
    } else {
        disc.matrix
            .lowest_eigenpairs(k, exec)
            .into_iter()
            .map(|(l, v)| (l, v, None))
            .collect()
    };

    let mut states = Vec::with_capacity(k);
    for (lambda, vector, parity) in raw.iter_mut() {
        fix_sign(vector);
        let wavefunction = FluxWavefunction::from_real(*grid, vector)?;
        let ratio = wavefunction.boundary_ratio();
        if ratio >= 1e-6 {
            return Err(Error::GridTooNarrow { ratio });
        }
        states.push(FluxEigenstate {
            energy: *lambda * disc.hopping,
            wavefunction,
            parity: *parity,
        });
    }
    Ok(states)
}

/// Tunnel splitting `E₁ − E₀` (J).
///
/// For a reflection-symmetric problem the splitting comes from the discrete
/// Wronskian of the even and odd states across the grid centre,
/// `t (w_l u_{l+1} − u_l w_{l+1}) / Σ_{i≤l} u_i w_i`, which stays accurate
/// when the splitting is far below the resolution of the eigenvalues
/// themselves. Otherwise it is the plain eigenvalue difference.
pub fn tunnel_splitting(params: &FluxQubitParams, grid: &FluxGrid) -> Result<f64> {
    let states = eigenstates(params, grid, 2)?;
    Ok(splitting_from_states(params, grid, &states))
}

fn splitting_from_states(params: &FluxQubitParams, grid: &FluxGrid, states: &[FluxEigenstate]) -> f64 {
    match (states[0].parity, states[1].parity) {
        (Some(Parity::Even), Some(Parity::Odd)) => {
            let h = grid.spacing();
            let hopping = CONSTANTS.hbar.powi(2) / (2.0 * params.c_j * h * h);
            let u = states[0].wavefunction.real_parts();
            let w = states[1].wavefunction.real_parts();
            let n = grid.n;
            let l = if n.is_multiple_of(2) { n / 2 - 1 } else { (n - 1) / 2 - 1 };
            let overlap: f64 = u[..=l].iter().zip(&w[..=l]).map(|(a, b)| a * b).sum();
            hopping * (w[l] * u[l + 1] - u[l] * w[l + 1]) / overlap
        }
        _ => states[1].energy - states[0].energy,
    }
}

/// The two well minima bracketing `Φ₀/2` and the barrier height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Minima {
    pub phi_l: f64,
    pub phi_r: f64,
    /// `U(Φ₀/2) − U(Φ_L)` (J).
    pub barrier: f64,
}

pub fn find_minima(params: &FluxQubitParams) -> Result<Minima> {
    let phi0 = CONSTANTS.phi0;
    if !(0.4 * phi0..=0.6 * phi0).contains(&params.phi_a) {
        return Err(Error::Domain(format!(
            "bias {:.4} Phi0 outside [0.4, 0.6] Phi0",
            params.phi_a / phi0
        )));
    }
    if !params.is_double_well() {
        return Err(Error::NoDoubleWell { beta: params.beta() });
    }
    let slope = |phi: f64| params.potential_slope(phi);
    let (lo, hi) = (params.phi_a - phi0, params.phi_a + phi0);
    let samples = 4000;
    let step = (hi - lo) / samples as f64;
    let mut minima = Vec::new();
    let mut prev = slope(lo);
    for i in 1..=samples {
        let x = lo + step * i as f64;
        let s = slope(x);
        if prev < 0.0 && s >= 0.0 {
            minima.push(refine_root(&slope, x - step, x));
        }
        prev = s;
    }
    let half = phi0 / 2.0;
    let phi_l = minima.iter().copied().filter(|&m| m < half).fold(None, |acc: Option<f64>, m| {
        Some(acc.map_or(m, |a| a.max(m)))
    });
    let phi_r = minima.iter().copied().filter(|&m| m > half).fold(None, |acc: Option<f64>, m| {
        Some(acc.map_or(m, |a| a.min(m)))
    });
    match (phi_l, phi_r) {
        (Some(phi_l), Some(phi_r)) => Ok(Minima {
            phi_l,
            phi_r,
            barrier: potential(params, half) - potential(params, phi_l),
        }),
        _ => Err(Error::NoDoubleWell { beta: params.beta() }),
    }
}

/// Bisection for a sign change of `f` on `[a, b]` with `f(a) < 0 ≤ f(b)`.
fn refine_root(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if f(mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    // pick the endpoint with the smaller residual
    if f(a).abs() <= f(b).abs() {
        a
    } else {
        b
    }
}

/// Double-well structure and the two-Gaussian picture of the ground state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoubleWellSummary {
    pub phi_l: f64,
    pub phi_r: f64,
    /// Bias flux the summary was computed at (Wb).
    pub phi_a: f64,
    pub barrier: f64,
    /// RMS flux spread of each well's harmonic ground state,
    /// `√(ħ / 2 C_j ω_well)` (Wb).
    pub delta_phi: f64,
    /// `|⟨Φ_L|Φ_R⟩|` of the two well Gaussians.
    pub overlap: f64,
    pub i_l: f64,
    pub i_r: f64,
    /// `E₁ − E₀` (J).
    pub splitting: f64,
    /// `|⟨two-Gaussian ansatz | numerical ground state⟩|²`.
    pub fidelity: f64,
    pub ground_energy: f64,
}

impl DoubleWellSummary {
    /// `ΔΦ / (Φ_R − Φ_L)`.
    pub fn width_ratio(&self) -> f64 {
        self.delta_phi / (self.phi_r - self.phi_l)
    }
}

pub fn two_gaussian_summary(params: &FluxQubitParams, grid: &FluxGrid) -> Result<DoubleWellSummary> {
    let minima = find_minima(params)?;
    let curvature = params.potential_curvature(minima.phi_l);
    let omega_well = (curvature / params.c_j).sqrt();
    let delta_phi = (CONSTANTS.hbar / (2.0 * params.c_j * omega_well)).sqrt();
    let separation = minima.phi_r - minima.phi_l;
    // Gaussians with |ψ|² standard deviation ΔΦ overlap as exp(−d²/8ΔΦ²).
    let overlap = (-separation * separation / (8.0 * delta_phi * delta_phi)).exp();

    let states = eigenstates(params, grid, 2)?;
    let ansatz: Vec<f64> = grid
        .points()
        .map(|phi| {
            let g = |c: f64| (-(phi - c).powi(2) / (4.0 * delta_phi * delta_phi)).exp();
            g(minima.phi_l) + g(minima.phi_r)
        })
        .collect();
    let ansatz = FluxWavefunction::from_real(*grid, &ansatz)?;
    let fidelity = ansatz.inner(&states[0].wavefunction).norm_sqr();

    Ok(DoubleWellSummary {
        phi_l: minima.phi_l,
        phi_r: minima.phi_r,
        phi_a: params.phi_a,
        barrier: minima.barrier,
        delta_phi,
        overlap,
        i_l: persistent_current(params, minima.phi_l),
        i_r: persistent_current(params, minima.phi_r),
        splitting: splitting_from_states(params, grid, &states),
        fidelity,
        ground_energy: states[0].energy,
    })
}

/// Well-localised states `(ψ₀ ± ψ₁)/√2`, returned as `(left, right)` by
/// their mean flux.
pub fn well_states(params: &FluxQubitParams, grid: &FluxGrid) -> Result<(FluxWavefunction, FluxWavefunction)> {
    let states = eigenstates(params, grid, 2)?;
    let combine = |sign: f64| -> Result<FluxWavefunction> {
        let v: Vec<f64> = states[0]
            .wavefunction
            .amplitudes
            .iter()
            .zip(&states[1].wavefunction.amplitudes)
            .map(|(a, b)| a.re + sign * b.re)
            .collect();
        FluxWavefunction::from_real(*grid, &v)
    };
    let (plus, minus) = (combine(1.0)?, combine(-1.0)?);
    if plus.mean_flux() <= minus.mean_flux() {
        Ok((plus, minus))
    } else {
        Ok((minus, plus))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn phi0() -> f64 {
        CONSTANTS.phi0
    }

    #[test]
    fn reference_minima_at_quarter_points() {
        let m = find_minima(&FluxQubitParams::reference()).unwrap();
        assert_relative_eq!(m.phi_l, 0.25 * phi0(), max_relative = 1e-9);
        assert_relative_eq!(m.phi_r, 0.75 * phi0(), max_relative = 1e-9);
    }

    #[test]
    fn reference_barrier() {
        let p = FluxQubitParams::reference();
        let m = find_minima(&p).unwrap();
        let closed = p.e_j() - (0.25 * phi0()).powi(2) / (2.0 * p.l);
        assert_relative_eq!(m.barrier, closed, max_relative = 1e-9);
        assert_relative_eq!(m.barrier, 5.7e-21, max_relative = 0.01);
    }

    #[test]
    fn single_well_rejected() {
        let mut p = FluxQubitParams::reference();
        p.i_c = 0.5 * phi0() / (2.0 * std::f64::consts::PI * p.l);
        assert!(matches!(find_minima(&p), Err(Error::NoDoubleWell { .. })));
        let mut q = FluxQubitParams::reference();
        q.phi_a = 0.3 * phi0();
        assert!(matches!(find_minima(&q), Err(Error::Domain(_))));
    }

    #[test]
    fn parity_of_low_states() {
        let states = eigenstates(&FluxQubitParams::reference(), &FluxGrid::with_points(1024), 2).unwrap();
        assert_eq!(states[0].parity, Some(Parity::Even));
        assert_eq!(states[1].parity, Some(Parity::Odd));
        assert!(states[0].wavefunction.reflection_error(Parity::Even) < 1e-12);
        assert!(states[1].wavefunction.reflection_error(Parity::Odd) < 1e-12);
        assert!(states[0].energy <= states[1].energy);
    }

    #[test]
    fn odd_point_count_matches_even() {
        let p = FluxQubitParams::reference();
        let a = eigenstates(&p, &FluxGrid::with_points(2048), 2).unwrap();
        let b = eigenstates(&p, &FluxGrid::with_points(2049), 2).unwrap();
        assert_relative_eq!(a[0].energy, b[0].energy, max_relative = 1e-6);
        assert_eq!(b[0].parity, Some(Parity::Even));
    }

    #[test]
    fn grid_must_span_bias_window() {
        let p = FluxQubitParams::reference();
        let narrow = FluxGrid::new(0.1 * phi0(), 0.9 * phi0(), 512).unwrap();
        assert!(eigenstates(&p, &narrow, 2).is_err());
        assert!(eigenstates(&p, &FluxGrid::reference(), 1).is_err());
    }

    #[test]
    fn boundary_amplitude_check_fires() {
        // a very light junction spreads the harmonic state across the grid
        let p = FluxQubitParams::new(6.44e-12, 1e-20, 0.0, 0.5 * phi0()).unwrap();
        assert!(matches!(
            eigenstates(&p, &FluxGrid::with_points(512), 2),
            Err(Error::GridTooNarrow { .. })
        ));
    }

    #[test]
    fn well_states_are_localised() {
        let p = FluxQubitParams::reference();
        let (l, r) = well_states(&p, &FluxGrid::with_points(2048)).unwrap();
        assert_relative_eq!(l.mean_flux(), 0.25 * phi0(), max_relative = 1e-3);
        assert_relative_eq!(r.mean_flux(), 0.75 * phi0(), max_relative = 1e-3);
        assert!(l.inner(&r).norm() < 1e-8);
    }
}

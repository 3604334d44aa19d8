use std::f64::consts::PI;

use num_complex::Complex64;

pub const MU0: f64 = 1.256_637_062_12e-6;
pub const HBAR: f64 = 1.054_571_817e-34;
pub const H_PLANCK: f64 = 6.626_070_15e-34;
pub const E_CHARGE: f64 = 1.602_176_634e-19;
pub const MU_B: f64 = 9.274_010_078_3e-24;
pub const PHI0: f64 = H_PLANCK / (2.0 * E_CHARGE);
pub const AMU: f64 = 1.660_539_066_60e-27;
pub const M_RB87: f64 = 86.909_180_527 * AMU;

/// Field `(B_ρ, B_z)` at `(ρ, 0, z)` of a circular filament of radius `r`
/// in the `z = 0` plane, by the midpoint rule over `segments` chords.
pub fn biot_savart(current: f64, r: f64, rho: f64, z: f64, segments: usize) -> (f64, f64) {
    let d = 2.0 * PI / segments as f64;
    let (mut bx, mut bz) = (0.0, 0.0);
    for k in 0..segments {
        let phi = (k as f64 + 0.5) * d;
        let (a0, a1) = (phi - 0.5 * d, phi + 0.5 * d);
        let dl = [r * (a1.cos() - a0.cos()), r * (a1.sin() - a0.sin()), 0.0];
        let src = [r * phi.cos(), r * phi.sin(), 0.0];
        let sep = [rho - src[0], -src[1], z - src[2]];
        let dist = (sep[0] * sep[0] + sep[1] * sep[1] + sep[2] * sep[2]).sqrt();
        let inv3 = 1.0 / (dist * dist * dist);
        bx += (dl[1] * sep[2] - dl[2] * sep[1]) * inv3;
        bz += (dl[0] * sep[1] - dl[1] * sep[0]) * inv3;
    }
    let k = MU0 * current / (4.0 * PI);
    (k * bx, k * bz)
}

/// `∂B_z/∂z` from the quadrature field, fourth-order central difference.
pub fn biot_savart_gradient(current: f64, r: f64, rho: f64, z: f64, segments: usize) -> f64 {
    let h = 1e-3 * r;
    let bz = |zz: f64| biot_savart(current, r, rho, zz, segments).1;
    (-bz(z + 2.0 * h) + 8.0 * bz(z + h) - 8.0 * bz(z - h) + bz(z - 2.0 * h)) / (12.0 * h)
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// Flux through the disk `ρ < r` in the plane `z = 0` of a `z`-polarised
/// point dipole of moment `m` at height `z0`, from the vector dipole field.
pub fn dipole_disk_flux(m: f64, r: f64, z0: f64) -> f64 {
    let bz = |rho: f64| {
        // r_vec from dipole to field point
        let (dx, dz) = (rho, -z0);
        let d2 = dx * dx + dz * dz;
        let d = d2.sqrt();
        MU0 / (4.0 * PI) * (3.0 * m * dz * dz / (d2 * d2 * d) - m / (d2 * d))
    };
    simpson(|rho| 2.0 * PI * rho * bz(rho), 0.0, r, 20_000)
}

/// Outward flux of `field(ρ, z) -> (B_ρ, B_z)` through the closed cylinder
/// `ρ ≤ a`, `z₁ ≤ z ≤ z₂`, and the sum of the absolute face fluxes.
pub fn cylinder_net_flux(field: impl Fn(f64, f64) -> (f64, f64), a: f64, z1: f64, z2: f64, n: usize) -> (f64, f64) {
    let top = simpson(|rho| 2.0 * PI * rho * field(rho, z2).1, 0.0, a, n);
    let bottom = simpson(|rho| 2.0 * PI * rho * field(rho, z1).1, 0.0, a, n);
    let side = simpson(|z| 2.0 * PI * a * field(a, z).0, z1, z2, n);
    (top - bottom + side, top.abs() + bottom.abs() + side.abs())
}

/// Position of the maximum of a unimodal `f` on `[a, b]`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    for _ in 0..200 {
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    0.5 * (a + b)
}

/// On-axis gradient of an ideal loop, written out from the on-axis field.
pub fn onaxis_gradient(current: f64, r: f64, z: f64) -> f64 {
    -1.5 * MU0 * current * r * r * z / (r * r + z * z).powf(2.5)
}

/// `ħω(n + ½)` for an LC oscillator.
pub fn harmonic_level(l: f64, c: f64, n: usize) -> f64 {
    HBAR / (l * c).sqrt() * (n as f64 + 0.5)
}

/// All eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations,
/// ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

/// Sampled 1-D Gaussian packet `(πσ²)^{-1/4} e^{−z²/2σ²} e^{ipz/ħ}` on
/// `n` points over `±half`.
pub fn sampled_packet(p: f64, sigma: f64, half: f64, n: usize) -> (f64, Vec<Complex64>) {
    let dz = 2.0 * half / (n - 1) as f64;
    let norm = (PI * sigma * sigma).powf(-0.25);
    let psi = (0..n)
        .map(|i| {
            let z = -half + dz * i as f64;
            Complex64::from_polar(norm * (-z * z / (2.0 * sigma * sigma)).exp(), p * z / HBAR)
        })
        .collect();
    (dz, psi)
}

/// `⟨a|b⟩` on a uniform grid.
pub fn inner(dz: f64, a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>() * dz
}

/// Trapezoid rule on samples.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum()
}

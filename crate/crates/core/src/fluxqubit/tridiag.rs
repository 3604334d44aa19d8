use crate::error::{Error, Result};
use crate::exec::Exec;

/// Real symmetric tridiagonal matrix.
///
/// `off[i]` couples rows `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Domain(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal",
                diag.len(),
                off.len()
            )));
        }
        if diag.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite tridiagonal entry".into()));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE.sqrt() * self.norm_bound().max(1.0);
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.len() {
            if i > 0 {
                let e = self.off[i - 1];
                q = self.diag[i] - x - e * e / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let span = hi - lo;
        lo -= 1e-12 * span.max(f64::MIN_POSITIVE);
        hi += 1e-12 * span.max(f64::MIN_POSITIVE);
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `k` smallest eigenvalues in ascending order.
    pub fn lowest_eigenvalues(&self, k: usize, exec: Exec) -> Vec<f64> {
        let k = k.min(self.len());
        exec.map_indices(k, |j| self.eigenvalue(j))
    }

    /// Unit eigenvector for an accurate eigenvalue `lambda`, by twisted
    /// factorisation.
    ///
    /// The vector is built outward from the twist index with ratios of
    /// pivots, so small components (tunnelling tails) keep their relative
    /// accuracy instead of being swamped by rounding in the large ones.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        if n == 1 {
            return vec![1.0];
        }
        let tiny = f64::MIN_POSITIVE.sqrt() * self.norm_bound().max(1.0) * f64::EPSILON;
        let guard = |q: f64| if q.abs() < tiny { if q < 0.0 { -tiny } else { tiny } } else { q };

        let mut fwd = vec![0.0; n];
        fwd[0] = guard(self.diag[0] - lambda);
        for i in 1..n {
            let e = self.off[i - 1];
            fwd[i] = guard(self.diag[i] - lambda - e * e / fwd[i - 1]);
        }
        let mut bwd = vec![0.0; n];
        bwd[n - 1] = guard(self.diag[n - 1] - lambda);
        for i in (0..n - 1).rev() {
            let e = self.off[i];
            bwd[i] = guard(self.diag[i] - lambda - e * e / bwd[i + 1]);
        }
        let twist = (0..n)
            .min_by(|&a, &b| {
                let ga = (fwd[a] + bwd[a] - (self.diag[a] - lambda)).abs();
                let gb = (fwd[b] + bwd[b] - (self.diag[b] - lambda)).abs();
                ga.total_cmp(&gb)
            })
            .unwrap_or(0);

        let mut z = vec![0.0; n];
        z[twist] = 1.0;
        for i in (0..twist).rev() {
            z[i] = -self.off[i] * z[i + 1] / fwd[i];
        }
        for i in twist + 1..n {
            z[i] = -self.off[i - 1] * z[i - 1] / bwd[i];
        }
        let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        z.iter_mut().for_each(|v| *v /= norm);
        z
    }

    /// Lowest `k` eigenpairs. Vectors of eigenvalues that are numerically
    /// clustered are re-orthogonalised.
    pub fn lowest_eigenpairs(&self, k: usize, exec: Exec) -> Vec<(f64, Vec<f64>)> {
        let values = self.lowest_eigenvalues(k, exec);
        let mut vectors = exec.map_slice(&values, |&lambda| self.eigenvector(lambda));
        let cluster_gap = 1e-9 * self.norm_bound();
        for j in 1..vectors.len() {
            for i in 0..j {
                if (values[j] - values[i]).abs() < cluster_gap {
                    let (head, tail) = vectors.split_at_mut(j);
                    let dot: f64 = head[i].iter().zip(&tail[0]).map(|(a, b)| a * b).sum();
                    tail[0].iter_mut().zip(&head[i]).for_each(|(b, a)| *b -= dot * a);
                    let norm = tail[0].iter().map(|v| v * v).sum::<f64>().sqrt();
                    tail[0].iter_mut().for_each(|v| *v /= norm);
                }
            }
        }
        values.into_iter().zip(vectors).collect()
    }

    /// `y = T x`
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off[i] * x[i + 1];
                }
                y
            })
            .collect()
    }
}

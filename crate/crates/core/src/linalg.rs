//! Symmetric tridiagonal operators.
//!
//! Every operator in the zonal model is a weighted three-point stencil, so
//! everything reduces to symmetric tridiagonal matrices: lowest eigenvalues by
//! Sturm bisection, full spectra through `nalgebra`, and linear solves by the
//! Thomas algorithm.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

/// Eigenpairs sorted by ascending eigenvalue; `vectors[i]` belongs to `values[i]`.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length mismatch");
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for i in 0..n - 1 {
            y[i] += self.off[i] * x[i + 1];
            y[i + 1] += self.off[i] * x[i];
        }
        y
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.len() {
            let coupling = if i > 0 { self.off[i - 1] * self.off[i - 1] } else { 0.0 };
            q = self.diag[i] - x - if i > 0 { coupling / q } else { 0.0 };
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + x.abs() + 1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        assert!(index < self.len());
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(1e-300);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * scale {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn lowest_eigenvalue(&self) -> f64 {
        self.eigenvalue(0)
    }

    /// Full eigendecomposition, ascending, with unit Euclidean eigenvectors.
    pub fn eigen(&self) -> Result<EigenPairs> {
        let n = self.len();
        let mut dense = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            dense[(i, i)] = self.diag[i];
            if i + 1 < n {
                dense[(i, i + 1)] = self.off[i];
                dense[(i + 1, i)] = self.off[i];
            }
        }
        let eig = dense
            .try_symmetric_eigen(1e-15, 0)
            .ok_or_else(|| Error::Eigensolver(format!("no convergence for n = {n}")))?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = order
            .iter()
            .map(|&i| {
                let col = eig.eigenvectors.column(i);
                let mut v: Vec<f64> = col.iter().copied().collect();
                // deterministic sign: largest-magnitude entry positive
                let (imax, _) = v
                    .iter()
                    .enumerate()
                    .fold((0, 0.0), |acc, (j, x)| if x.abs() > acc.1 + 1e-12 { (j, x.abs()) } else { acc });
                if v[imax] < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                v
            })
            .collect();
        Ok(EigenPairs { values, vectors })
    }

    /// Solves `self · x = rhs` by the Thomas algorithm (no pivoting; intended
    /// for diagonally dominant or SPD systems).
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = self.diag[0];
        c[0] = if n > 1 { self.off[0] / denom } else { 0.0 };
        d[0] = rhs[0] / denom;
        for i in 1..n {
            denom = self.diag[i] - self.off[i - 1] * c[i - 1];
            if i + 1 < n {
                c[i] = self.off[i] / denom;
            }
            d[i] = (rhs[i] - self.off[i - 1] * d[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> SymTridiag {
        SymTridiag::new(vec![2.0; n], vec![-1.0; n - 1])
    }

    #[test]
    fn bisection_matches_closed_form() {
        let n = 40;
        let t = laplacian_1d(n);
        for k in [0, 1, 5, 39] {
            let exact = 2.0 - 2.0 * (((k + 1) as f64) * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((t.eigenvalue(k) - exact).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn full_eigen_agrees_with_bisection_and_is_orthonormal() {
        let t = SymTridiag::new(
            (0..30).map(|i| 1.0 + (i as f64).sin()).collect(),
            (0..29).map(|i| 0.3 + 0.1 * (i as f64).cos()).collect(),
        );
        let eig = t.eigen().unwrap();
        for (k, &l) in eig.values.iter().enumerate() {
            assert!((l - t.eigenvalue(k)).abs() < 1e-11);
            let av = t.apply(&eig.vectors[k]);
            let res: f64 = av.iter().zip(&eig.vectors[k]).map(|(a, v)| (a - l * v).powi(2)).sum();
            assert!(res.sqrt() < 1e-10);
        }
        let dot: f64 = eig.vectors[3].iter().zip(&eig.vectors[7]).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 1e-12);
    }

    #[test]
    fn thomas_solves() {
        let t = laplacian_1d(25);
        let x: Vec<f64> = (0..25).map(|i| (i as f64 * 0.3).cos()).collect();
        let b = t.apply(&x);
        let y = t.solve(&b);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

//! Cyclic Jacobi eigensolver and Gershgorin bounds.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;

/// Maximum number of full cyclic sweeps.
pub const MAX_SWEEPS: usize = 40;
/// Convergence threshold on the off-diagonal Frobenius norm, relative to `‖A‖_F`.
pub const OFF_TOL: f64 = 1e-12;

/// Tolerance below zero still classified as PSD: `1e-9 · max(1, ‖A‖_F)`.
pub fn psd_tol(a: &SymMatrix) -> f64 {
    1e-9 * a.frobenius_norm().max(1.0)
}

/// `A = Q Λ Qᵀ` with eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    n: usize,
    /// Row-major; column `k` is the eigenvector of `lambda[k]`.
    q: Vec<f64>,
    lambda: Vec<f64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.lambda
    }

    /// Entry `(i, k)` of `Q`.
    pub fn q(&self, i: usize, k: usize) -> f64 {
        self.q[i * self.n + k]
    }

    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.q(i, k)).collect()
    }

    pub fn min(&self) -> f64 {
        self.lambda[self.n - 1]
    }

    pub fn max(&self) -> f64 {
        self.lambda[0]
    }

    /// `Q diag(w) Qᵀ`.
    pub fn synthesize(&self, w: &[f64]) -> SymMatrix {
        let n = self.n;
        SymMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| self.q(i, k) * w[k] * self.q(j, k)).sum()
        })
        .expect("finite eigenvectors give finite products")
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.synthesize(&self.lambda)
    }
}

fn off_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..i {
            s += 2.0 * a[i * n + j] * a[i * n + j];
        }
    }
    libm::sqrt(s)
}

/// Full eigendecomposition by cyclic-by-row Jacobi rotations.
pub fn jacobi_eigen(a: &SymMatrix) -> Result<EigenDecomposition> {
    let n = a.dim();
    let mut m = a.to_dense();
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    let threshold = OFF_TOL * a.frobenius_norm();

    let mut sweeps = 0;
    loop {
        let off = off_norm(&m, n);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n {
            for r in p + 1..n {
                rotate(&mut m, &mut q, n, p, r);
            }
        }
        sweeps += 1;
    }

    let diag: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable, so ties keep the Jacobi output order.
    order.sort_by(|&x, &y| diag[y].total_cmp(&diag[x]));
    let lambda = order.iter().map(|&k| diag[k]).collect();
    let mut sorted_q = vec![0.0; n * n];
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            sorted_q[i * n + dst] = q[i * n + src];
        }
    }
    Ok(EigenDecomposition {
        n,
        q: sorted_q,
        lambda,
    })
}

/// Annihilates `m[p][r]` with `m ← Jᵀ m J` and accumulates `q ← q J`.
fn rotate(m: &mut [f64], q: &mut [f64], n: usize, p: usize, r: usize) {
    let apr = m[p * n + r];
    if apr == 0.0 {
        return;
    }
    let app = m[p * n + p];
    let arr = m[r * n + r];
    let tau = (arr - app) / (2.0 * apr);
    let t = if tau >= 0.0 {
        1.0 / (tau + libm::sqrt(1.0 + tau * tau))
    } else {
        -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
    };
    let c = 1.0 / libm::sqrt(1.0 + t * t);
    let s = t * c;

    for k in 0..n {
        let mkp = m[k * n + p];
        let mkr = m[k * n + r];
        m[k * n + p] = c * mkp - s * mkr;
        m[k * n + r] = s * mkp + c * mkr;
    }
    for k in 0..n {
        let mpk = m[p * n + k];
        let mrk = m[r * n + k];
        m[p * n + k] = c * mpk - s * mrk;
        m[r * n + k] = s * mpk + c * mrk;
    }
    m[p * n + r] = 0.0;
    m[r * n + p] = 0.0;

    for k in 0..n {
        let qkp = q[k * n + p];
        let qkr = q[k * n + r];
        q[k * n + p] = c * qkp - s * qkr;
        q[k * n + r] = s * qkp + c * qkr;
    }
}

/// Gershgorin enclosure `(lo, hi)` of the spectrum.
pub fn gershgorin_bounds(a: &SymMatrix) -> (f64, f64) {
    let n = a.dim();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let radius: f64 = (0..n).filter(|&j| j != i).map(|j| a.get(i, j).abs()).sum();
        let d = a.get(i, i);
        lo = lo.min(d - radius);
        hi = hi.max(d + radius);
    }
    (lo, hi)
}

/// `‖A‖_*`, the sum of absolute eigenvalues.
pub fn nuclear_norm(a: &SymMatrix) -> Result<f64> {
    Ok(jacobi_eigen(a)?.eigenvalues().iter().map(|x| x.abs()).sum())
}

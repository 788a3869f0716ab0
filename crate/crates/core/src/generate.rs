//! Reproducible random symmetric test matrices.
//!
//! All families draw from SplitMix64 seeded directly with the user seed.
//! Uniforms take the top 53 bits of each output; normals use the cosine
//! branch of Box–Muller with `libm` transcendentals, so the same seed yields
//! bit-identical matrices on every platform.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::matrix::{LowerTriangular, SymMatrix};

/// Deterministic generator used by every family.
#[derive(Debug, Clone)]
pub struct SplitMix {
    inner: SplitMix64,
}

impl SplitMix {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal.
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }
}

/// Dense symmetric matrix with independent N(0,1) lower-triangle entries.
pub fn random_symmetric(n: usize, rng: &mut SplitMix) -> SymMatrix {
    SymMatrix::from_fn(n, |_, _| rng.normal()).expect("normals are finite")
}

/// Gaussian entries within `k` of the diagonal, zero elsewhere.
pub fn banded(n: usize, k: usize, rng: &mut SplitMix) -> SymMatrix {
    SymMatrix::from_fn(n, |i, j| if i - j <= k { rng.normal() } else { 0.0 })
        .expect("normals are finite")
}

/// Gaussian diagonal; each off-diagonal pair present with probability `p`.
pub fn sprand(n: usize, p: f64, rng: &mut SplitMix) -> SymMatrix {
    SymMatrix::from_fn(n, |i, j| {
        if i == j || rng.uniform() < p {
            rng.normal()
        } else {
            0.0
        }
    })
    .expect("normals are finite")
}

/// Eigenvalues log-spaced from 1 down to `1/cond`, hidden by a dense
/// orthogonal similarity built from random Jacobi rotations. With `signed`
/// each eigenvalue gets an independent random sign.
pub fn illcond(n: usize, cond: f64, signed: bool, rng: &mut SplitMix) -> SymMatrix {
    let mut lambda: Vec<f64> = (0..n)
        .map(|k| {
            if n == 1 {
                1.0
            } else {
                libm::pow(cond, -(k as f64) / (n - 1) as f64)
            }
        })
        .collect();
    if signed {
        for x in lambda.iter_mut() {
            if rng.next_u64() & 1 == 1 {
                *x = -*x;
            }
        }
    }
    let mut m = vec![0.0; n * n];
    for (i, &x) in lambda.iter().enumerate() {
        m[i * n + i] = x;
    }
    for _ in 0..2 {
        for p in 0..n {
            for q in p + 1..n {
                let theta = core::f64::consts::TAU * rng.uniform();
                let (s, c) = (libm::sin(theta), libm::cos(theta));
                for k in 0..n {
                    let (a, b) = (m[k * n + p], m[k * n + q]);
                    m[k * n + p] = c * a - s * b;
                    m[k * n + q] = s * a + c * b;
                }
                for k in 0..n {
                    let (a, b) = (m[p * n + k], m[q * n + k]);
                    m[p * n + k] = c * a - s * b;
                    m[q * n + k] = s * a + c * b;
                }
            }
        }
    }
    SymMatrix::from_row_major_lower(n, &m)
}

/// Lower-triangular matrix with N(0,1) strict lower part and diagonal
/// drawn from `[0.5, 2)`.
pub fn random_lower_positive(n: usize, rng: &mut SplitMix) -> LowerTriangular {
    let mut rows = vec![vec![0.0; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate().take(i + 1) {
            *x = if i == j {
                0.5 + 1.5 * rng.uniform()
            } else {
                rng.normal()
            };
        }
    }
    LowerTriangular::from_rows(&rows).expect("finite entries")
}

/// Positive definite `L Lᵀ` with `L` from [`random_lower_positive`].
pub fn random_psd(n: usize, rng: &mut SplitMix) -> SymMatrix {
    random_lower_positive(n, rng).gram()
}

//! Dense symmetric, lower-triangular and diagonal matrices.
//!
//! Symmetric and triangular matrices store only their lower triangle, packed
//! row by row: entry `(i, j)` with `i >= j` lives at `i * (i + 1) / 2 + j`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

use crate::error::{Error, Result};

/// Relative symmetry tolerance accepted on dense input.
pub const SYM_TOL: f64 = 1e-10;

#[inline]
pub(crate) fn packed_index(i: usize, j: usize) -> usize {
    debug_assert!(i >= j);
    i * (i + 1) / 2 + j
}

#[inline]
fn packed_len(n: usize) -> usize {
    n * (n + 1) / 2
}

fn check_finite(n: usize, data: &[f64]) -> Result<()> {
    if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
        // Invert the packed index for the error message.
        let mut i = 0;
        while packed_index(i + 1, 0) <= pos && i + 1 < n {
            i += 1;
        }
        return Err(Error::NonFinite {
            i,
            j: pos - packed_index(i, 0),
        });
    }
    Ok(())
}

/// Dense real symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds a matrix from its packed lower triangle.
    pub fn from_packed(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if data.len() != packed_len(n) {
            return Err(Error::DimensionMismatch {
                expected: packed_len(n),
                found: data.len(),
            });
        }
        check_finite(n, &data)?;
        Ok(Self { n, data })
    }

    pub(crate) fn from_packed_unchecked(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), packed_len(n));
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "dimension must be positive");
        Self {
            n,
            data: vec![0.0; packed_len(n)],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.data[packed_index(i, i)] = x;
        }
        m
    }

    /// Builds a matrix by evaluating `f(i, j)` on the lower triangle.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(packed_len(n));
        for i in 0..n {
            for j in 0..=i {
                data.push(f(i, j));
            }
        }
        Self::from_packed(n, data)
    }

    /// Symmetric matrix from a full row-major buffer, reading the lower
    /// triangle only.
    pub(crate) fn from_row_major_lower(n: usize, dense: &[f64]) -> Self {
        let mut data = Vec::with_capacity(packed_len(n));
        for i in 0..n {
            data.extend_from_slice(&dense[i * n..i * n + i + 1]);
        }
        Self { n, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i >= j {
            self.data[packed_index(i, j)]
        } else {
            self.data[packed_index(j, i)]
        }
    }

    pub fn packed(&self) -> &[f64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.data[packed_index(i, i)]).collect()
    }

    /// Full row-major copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let x = self.data[packed_index(i, j)];
                out[i * n + j] = x;
                out[j * n + i] = x;
            }
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[packed_index(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                let x = self.data[packed_index(i, j)];
                sum += if i == j { x * x } else { 2.0 * x * x };
            }
        }
        libm::sqrt(sum)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
    }

    pub fn max_abs_diag(&self) -> f64 {
        (0..self.n).fold(0.0, |m, i| f64::max(m, self.data[packed_index(i, i)].abs()))
    }

    pub fn max_diag(&self) -> f64 {
        (0..self.n)
            .map(|i| self.data[packed_index(i, i)])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self { n: self.n, data })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    /// `self + t I`.
    pub fn shifted(&self, t: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[packed_index(i, i)] += t;
        }
        out
    }

    /// `B = P A Pᵀ`, i.e. `B[i][j] = A[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &Permutation) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: perm.len(),
            });
        }
        let p = perm.as_slice();
        Ok(Self::from_fn(self.n, |i, j| self.get(p[i], p[j])).expect("finite by construction"))
    }

    /// Inverse of [`SymMatrix::permuted`].
    pub fn unpermuted(&self, perm: &Permutation) -> Result<Self> {
        self.permuted(&perm.inverse())
    }

    /// Number of entries of the full `n × n` matrix with `|x| > tol`.
    pub fn count_nonzeros(&self, tol: f64) -> usize {
        let mut count = 0;
        for i in 0..self.n {
            for j in 0..=i {
                if self.data[packed_index(i, j)].abs() > tol {
                    count += if i == j { 1 } else { 2 };
                }
            }
        }
        count
    }

    /// Number of off-diagonal entries (both triangles) with `|x| > tol`.
    pub fn count_offdiag_nonzeros(&self, tol: f64) -> usize {
        let diag = (0..self.n)
            .filter(|&i| self.data[packed_index(i, i)].abs() > tol)
            .count();
        self.count_nonzeros(tol) - diag
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        if i >= j {
            &self.data[packed_index(i, j)]
        } else {
            &self.data[packed_index(j, i)]
        }
    }
}

/// Symmetrizes a square grid, `(i, j) = (grid[i][j] + grid[j][i]) / 2`.
///
/// Rejects grids whose asymmetry exceeds `1e-10 · max(1, max |entry|)`,
/// reporting the worst pair.
pub fn sym_from_dense<R: AsRef<[f64]>>(rows: &[R]) -> Result<SymMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    for (row, r) in rows.iter().enumerate() {
        if r.as_ref().len() != n {
            return Err(Error::NonSquare {
                rows: n,
                row,
                cols: r.as_ref().len(),
            });
        }
    }
    let mut flat = Vec::with_capacity(n * n);
    for r in rows {
        flat.extend_from_slice(r.as_ref());
    }
    sym_from_row_major(n, &flat)
}

/// Same as [`sym_from_dense`] for a row-major `n × n` buffer.
pub fn sym_from_row_major(n: usize, dense: &[f64]) -> Result<SymMatrix> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if dense.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: dense.len(),
        });
    }
    let mut max_abs = 0.0f64;
    for (k, x) in dense.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::NonFinite { i: k / n, j: k % n });
        }
        max_abs = max_abs.max(x.abs());
    }
    let tol = SYM_TOL * max_abs.max(1.0);
    let mut worst: Option<(usize, usize, f64)> = None;
    let mut data = Vec::with_capacity(packed_len(n));
    for i in 0..n {
        for j in 0..=i {
            let (lo, up) = (dense[i * n + j], dense[j * n + i]);
            let gap = (lo - up).abs();
            if gap > tol && worst.map_or(true, |(_, _, g)| gap > g) {
                worst = Some((i, j, gap));
            }
            // Halve before adding so entries near f64::MAX do not overflow.
            data.push(if lo == up { lo } else { 0.5 * lo + 0.5 * up });
        }
    }
    if let Some((i, j, gap)) = worst {
        return Err(Error::AsymmetricBeyondTolerance { i, j, gap, tol });
    }
    Ok(SymMatrix { n, data })
}

/// Dense lower-triangular matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerTriangular {
    n: usize,
    data: Vec<f64>,
}

impl LowerTriangular {
    pub fn from_packed(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if data.len() != packed_len(n) {
            return Err(Error::DimensionMismatch {
                expected: packed_len(n),
                found: data.len(),
            });
        }
        check_finite(n, &data)?;
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "dimension must be positive");
        Self {
            n,
            data: vec![0.0; packed_len(n)],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.data[packed_index(i, i)] = x;
        }
        m
    }

    /// Builds the factor from a row-major `n × n` buffer, ignoring the strict
    /// upper triangle.
    pub fn from_row_major_lower(n: usize, dense: &[f64]) -> Result<Self> {
        if dense.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: dense.len(),
            });
        }
        let mut data = Vec::with_capacity(packed_len(n));
        for i in 0..n {
            data.extend_from_slice(&dense[i * n..i * n + i + 1]);
        }
        Self::from_packed(n, data)
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut flat = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.as_ref().len() != n {
                return Err(Error::NonSquare {
                    rows: n,
                    row,
                    cols: r.as_ref().len(),
                });
            }
            flat.extend_from_slice(r.as_ref());
        }
        Self::from_row_major_lower(n, &flat)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`; zero above the diagonal.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i >= j {
            self.data[packed_index(i, j)]
        } else {
            0.0
        }
    }

    pub fn packed(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Sum of squared entries, equal to `Tr(L Lᵀ)`.
    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
    }

    /// Squared norms of each column.
    pub fn column_norms_sq(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for i in 0..self.n {
            for (j, slot) in out.iter_mut().enumerate().take(i + 1) {
                let x = self.data[packed_index(i, j)];
                *slot += x * x;
            }
        }
        out
    }

    pub fn count_nonzeros(&self, tol: f64) -> usize {
        self.data.iter().filter(|x| x.abs() > tol).count()
    }

    /// `L Lᵀ`.
    pub fn gram(&self) -> SymMatrix {
        self.gram_weighted(None)
    }

    /// `L D Lᵀ` for a diagonal `D`.
    pub fn gram_scaled(&self, d: &DiagMatrix) -> Result<SymMatrix> {
        if d.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: d.dim(),
            });
        }
        Ok(self.gram_weighted(Some(d.values())))
    }

    fn gram_weighted(&self, w: Option<&[f64]>) -> SymMatrix {
        let n = self.n;
        let mut data = vec![0.0; packed_len(n)];
        for i in 0..n {
            let ri = &self.data[packed_index(i, 0)..=packed_index(i, i)];
            for j in 0..=i {
                let rj = &self.data[packed_index(j, 0)..=packed_index(j, j)];
                let s: f64 = match w {
                    None => ri[..=j].iter().zip(rj).map(|(a, b)| a * b).sum(),
                    Some(w) => ri[..=j]
                        .iter()
                        .zip(rj)
                        .zip(w)
                        .map(|((a, b), c)| a * b * c)
                        .sum(),
                };
                data[packed_index(i, j)] = s;
            }
        }
        SymMatrix::from_packed_unchecked(n, data)
    }

    /// `L · diag(s)`, scaling column `k` by `s[k]`.
    pub fn scale_columns(&self, s: &[f64]) -> Result<Self> {
        if s.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: s.len(),
            });
        }
        let mut out = self.clone();
        for i in 0..self.n {
            for (j, sj) in s.iter().enumerate().take(i + 1) {
                out.data[packed_index(i, j)] *= sj;
            }
        }
        Ok(out)
    }
}

/// Diagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagMatrix {
    d: Vec<f64>,
}

impl DiagMatrix {
    pub fn new(d: Vec<f64>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(i) = d.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { i, j: i });
        }
        Ok(Self { d })
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "dimension must be positive");
        Self { d: vec![0.0; n] }
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.d
    }

    pub fn is_nonnegative(&self) -> bool {
        self.d.iter().all(|&x| x >= 0.0)
    }

    pub fn count_nonzeros(&self, tol: f64) -> usize {
        self.d.iter().filter(|x| x.abs() > tol).count()
    }
}

/// Symmetric permutation. `perm[k]` is the original index placed at
/// position `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Permutation {
    perm: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
        }
    }

    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidPermutation { n });
            }
            seen[p] = true;
        }
        Ok(Self { perm })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(k, &p)| k == p)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (k, &p) in self.perm.iter().enumerate() {
            inv[p] = k;
        }
        Self { perm: inv }
    }
}

/// `Pᵀ (L₁ L₁ᵀ − L₂ L₂ᵀ) P`, the difference expressed in the original
/// ordering.
pub fn reconstruct_difference(
    l1: &LowerTriangular,
    l2: &LowerTriangular,
    perm: &Permutation,
) -> Result<SymMatrix> {
    let n = l1.dim();
    for m in [l2.dim(), perm.len()] {
        if m != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m,
            });
        }
    }
    l1.gram().sub(&l2.gram())?.unpermuted(perm)
}

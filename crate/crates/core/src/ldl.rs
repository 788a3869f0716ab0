//! Cholesky, diagonal-pivoting LDLᵀ, and the LDL sign split
//! `A = L₁D₁L₁ᵀ − L₂D₂L₂ᵀ`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{DiagMatrix, LowerTriangular, Permutation, SymMatrix};
use crate::pair::{Method, PairForm, PsdPair};
use crate::pivot::{PivotStrategy, Schur};

/// Pivot threshold for [`cholesky`], relative to the largest diagonal entry.
pub const CHOL_TOL: f64 = 1e-12;
/// Pivot threshold for [`ldl`], relative to the largest entry of `A`.
pub const LDL_TOL: f64 = 1e-12;

/// `P A Pᵀ = L D Lᵀ` with unit lower-triangular `L` and diagonal `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct LdlFactorization {
    pub l: LowerTriangular,
    pub d: DiagMatrix,
    pub perm: Permutation,
}

/// Cholesky factor of a positive semidefinite matrix, without pivoting.
///
/// A pivot `a ≤ 1e-12 · max diag` is treated as zero; its column must then
/// vanish too, and the factor gets a zero column.
pub fn cholesky(a: &SymMatrix) -> Result<LowerTriangular> {
    let n = a.dim();
    let max_diag = a.max_diag().max(0.0);
    let tol = CHOL_TOL * max_diag;
    let zero_col_tol = libm::sqrt(tol * max_diag);

    let mut s = Schur::new(n, a.to_dense());
    let mut l = vec![0.0; n * n];
    for k in 0..n {
        let pivot = s.at(k, k);
        if pivot > tol {
            let root = libm::sqrt(pivot);
            l[k * n + k] = root;
            for r in k + 1..n {
                l[r * n + k] = s.at(r, k) / root;
            }
            s.rank_one_update(k, 1.0 / pivot);
        } else if pivot < -tol || (k + 1..n).any(|r| s.at(r, k).abs() > zero_col_tol) {
            return Err(Error::NotPsd { pivot: k });
        }
    }
    LowerTriangular::from_row_major_lower(n, &l)
}

/// Square-root-free factorization with 1×1 pivots only.
///
/// Fails with [`Error::PivotBreakdown`] when no usable diagonal pivot
/// (`|d| > 1e-12 · max|A|`) remains but the Schur complement is not zero,
/// which is exactly the situation that needs a 2×2 block.
pub fn ldl(a: &SymMatrix, pivot: PivotStrategy) -> Result<LdlFactorization> {
    let n = a.dim();
    let tol = LDL_TOL * a.max_abs();
    let usable = |d: f64| d.abs() > tol;

    let mut s = Schur::new(n, a.to_dense());
    let mut l = vec![0.0; n * n];
    let mut d = vec![0.0; n];
    let mut perm: Vec<usize> = (0..n).collect();

    let mut k = 0;
    while k < n {
        let chosen = s.select(pivot, k, tol, usable);
        let p = match chosen {
            Some(p) if usable(s.at(p, p)) => p,
            Some(p) => {
                // Natural order hit a tiny pivot: fine only if its column is empty.
                debug_assert_eq!(p, k);
                if (k + 1..n).any(|r| s.at(r, k).abs() > tol) {
                    return Err(Error::PivotBreakdown { step: k });
                }
                l[k * n + k] = 1.0;
                k += 1;
                continue;
            }
            None => {
                if s.active_max_abs(k) > tol {
                    return Err(Error::PivotBreakdown { step: k });
                }
                for r in k..n {
                    l[r * n + r] = 1.0;
                }
                break;
            }
        };
        if p != k {
            s.swap(k, k, p);
            perm.swap(k, p);
            for c in 0..k {
                l.swap(k * n + c, p * n + c);
            }
        }
        let dk = s.at(k, k);
        d[k] = dk;
        l[k * n + k] = 1.0;
        for r in k + 1..n {
            l[r * n + k] = s.at(r, k) / dk;
        }
        s.rank_one_update(k, 1.0 / dk);
        k += 1;
    }

    Ok(LdlFactorization {
        l: LowerTriangular::from_row_major_lower(n, &l)?,
        d: DiagMatrix::new(d)?,
        perm: Permutation::new(perm)?,
    })
}

/// Moves the columns of `L` with negative pivots into the second factor.
pub fn split_factorization(
    f: &LdlFactorization,
) -> (LowerTriangular, DiagMatrix, LowerTriangular, DiagMatrix) {
    let n = f.l.dim();
    let d = f.d.values();
    let keep_pos: Vec<f64> = d
        .iter()
        .map(|&x| if x >= 0.0 { 1.0 } else { 0.0 })
        .collect();
    let keep_neg: Vec<f64> = keep_pos.iter().map(|m| 1.0 - m).collect();
    let l1 = f.l.scale_columns(&keep_pos).expect("same dimension");
    let l2 = f.l.scale_columns(&keep_neg).expect("same dimension");
    let d1 = d.iter().map(|&x| x.max(0.0)).collect();
    let d2 = d.iter().map(|&x| (-x).max(0.0)).collect();
    debug_assert_eq!(l1.dim(), n);
    (
        l1,
        DiagMatrix::new(d1).expect("finite"),
        l2,
        DiagMatrix::new(d2).expect("finite"),
    )
}

/// LDL-based difference of PSD matrices.
pub fn ldl_split(a: &SymMatrix, pivot: PivotStrategy) -> Result<PsdPair> {
    let f = ldl(a, pivot)?;
    let (l1, d1, l2, d2) = split_factorization(&f);
    Ok(PsdPair {
        form: PairForm::FactoredLdl { l1, d1, l2, d2 },
        perm: f.perm,
        method: Method::Ldl { pivot },
        shift_t: None,
    })
}

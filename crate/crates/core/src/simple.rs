//! Identity-shift and eigenvalue splits.

use alloc::vec::Vec;

use crate::eigen::{gershgorin_bounds, jacobi_eigen};
use crate::error::{Error, Result};
use crate::matrix::{Permutation, SymMatrix};
use crate::pair::{Method, PairForm, PsdPair};

/// Source of the spectral bounds used to size the shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ShiftBound {
    #[default]
    Gershgorin,
    /// Extreme eigenvalues from the Jacobi solver.
    Exact,
}

/// Shift split with Gershgorin bounds.
pub fn shift_split(a: &SymMatrix, margin: f64) -> Result<PsdPair> {
    shift_split_with(a, margin, ShiftBound::Gershgorin)
}

/// `P₊ = A + tI, P₋ = tI` when `|λ_min|` is the smaller bound, otherwise
/// `P₊ = tI, P₋ = tI − A`. Ties take the first form.
pub fn shift_split_with(a: &SymMatrix, margin: f64, bound: ShiftBound) -> Result<PsdPair> {
    if !(margin >= 0.0 && margin.is_finite()) {
        return Err(Error::InvalidConfig(
            "shift margin must be finite and nonnegative",
        ));
    }
    let n = a.dim();
    let (lo, hi) = match bound {
        ShiftBound::Gershgorin => gershgorin_bounds(a),
        ShiftBound::Exact => {
            let e = jacobi_eigen(a)?;
            (e.min(), e.max())
        }
    };
    let (plus, minus, t) = if lo >= 0.0 {
        (a.clone(), SymMatrix::zeros(n), 0.0)
    } else if lo.abs() <= hi.abs() {
        let t = lo.abs() + margin;
        (a.shifted(t), SymMatrix::identity(n).scaled(t), t)
    } else {
        // A negative semidefinite bound (hi <= 0) needs no positive shift.
        let t = hi.max(0.0) + margin;
        (
            SymMatrix::identity(n).scaled(t),
            a.scaled(-1.0).shifted(t),
            t,
        )
    };
    Ok(PsdPair {
        form: PairForm::Explicit { plus, minus },
        perm: Permutation::identity(n),
        method: Method::Shift { margin, bound },
        shift_t: Some(t),
    })
}

/// `P₊ = Q Λ₊ Qᵀ`, `P₋ = Q Λ₋ Qᵀ`; zero eigenvalues go to `Λ₊`.
pub fn eigen_split(a: &SymMatrix) -> Result<PsdPair> {
    let e = jacobi_eigen(a)?;
    let pos: Vec<f64> = e
        .eigenvalues()
        .iter()
        .map(|&l| if l >= 0.0 { l } else { 0.0 })
        .collect();
    let neg: Vec<f64> = e
        .eigenvalues()
        .iter()
        .map(|&l| if l < 0.0 { -l } else { 0.0 })
        .collect();
    Ok(PsdPair {
        form: PairForm::Explicit {
            plus: e.synthesize(&pos),
            minus: e.synthesize(&neg),
        },
        perm: Permutation::identity(a.dim()),
        method: Method::Eigen,
        shift_t: None,
    })
}

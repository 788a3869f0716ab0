//! The `(P₊, P₋)` result shared by every splitting strategy.

use crate::chtwo::ChtwoConfig;
use crate::error::{Error, Result};
use crate::matrix::{DiagMatrix, LowerTriangular, Permutation, SymMatrix};
use crate::pivot::PivotStrategy;
use crate::simple::ShiftBound;

/// Strategy that produced a pair, with its parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "method", rename_all = "lowercase"))]
pub enum Method {
    Shift { margin: f64, bound: ShiftBound },
    Eigen,
    Ldl { pivot: PivotStrategy },
    Chtwo(ChtwoConfig),
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Shift { .. } => "shift",
            Method::Eigen => "eigen",
            Method::Ldl { .. } => "ldl",
            Method::Chtwo(_) => "chtwo",
        }
    }
}

/// Storage form of the two parts. Factored forms are expressed in the
/// pivoted ordering `P A Pᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub enum PairForm {
    Explicit {
        plus: SymMatrix,
        minus: SymMatrix,
    },
    Factored {
        l1: LowerTriangular,
        l2: LowerTriangular,
    },
    FactoredLdl {
        l1: LowerTriangular,
        d1: DiagMatrix,
        l2: LowerTriangular,
        d2: DiagMatrix,
    },
}

/// `A = P₊ − P₋` with both parts positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdPair {
    pub form: PairForm,
    pub perm: Permutation,
    pub method: Method,
    /// Identity shift `t` for the shift strategy.
    pub shift_t: Option<f64>,
}

impl PsdPair {
    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// `P₊` in the original ordering.
    pub fn positive_part(&self) -> Result<SymMatrix> {
        match &self.form {
            PairForm::Explicit { plus, .. } => Ok(plus.clone()),
            PairForm::Factored { l1, .. } => l1.gram().unpermuted(&self.perm),
            PairForm::FactoredLdl { l1, d1, .. } => l1.gram_scaled(d1)?.unpermuted(&self.perm),
        }
    }

    /// `P₋` in the original ordering.
    pub fn negative_part(&self) -> Result<SymMatrix> {
        match &self.form {
            PairForm::Explicit { minus, .. } => Ok(minus.clone()),
            PairForm::Factored { l2, .. } => l2.gram().unpermuted(&self.perm),
            PairForm::FactoredLdl { l2, d2, .. } => l2.gram_scaled(d2)?.unpermuted(&self.perm),
        }
    }

    /// `P₊ − P₋` in the original ordering.
    pub fn reconstruct(&self) -> Result<SymMatrix> {
        self.positive_part()?.sub(&self.negative_part()?)
    }

    /// `(Tr P₊, Tr P₋)`, computed from the factors where available.
    pub fn traces(&self) -> (f64, f64) {
        fn weighted(l: &LowerTriangular, d: &DiagMatrix) -> f64 {
            l.column_norms_sq()
                .iter()
                .zip(d.values())
                .map(|(c, d)| c * d)
                .sum()
        }
        match &self.form {
            PairForm::Explicit { plus, minus } => (plus.trace(), minus.trace()),
            PairForm::Factored { l1, l2 } => (l1.frobenius_norm_sq(), l2.frobenius_norm_sq()),
            PairForm::FactoredLdl { l1, d1, l2, d2 } => (weighted(l1, d1), weighted(l2, d2)),
        }
    }

    /// The pair rewritten as plain Cholesky-style factors, `L · diag(√d)`.
    pub fn to_factored(&self) -> Result<Self> {
        let form = match &self.form {
            PairForm::FactoredLdl { l1, d1, l2, d2 } => {
                let sqrt = |d: &DiagMatrix| -> alloc::vec::Vec<f64> {
                    d.values().iter().map(|&x| libm::sqrt(x)).collect()
                };
                PairForm::Factored {
                    l1: l1.scale_columns(&sqrt(d1))?,
                    l2: l2.scale_columns(&sqrt(d2))?,
                }
            }
            PairForm::Factored { .. } => self.form.clone(),
            PairForm::Explicit { .. } => {
                return Err(Error::InvalidConfig("explicit pairs have no factors"))
            }
        };
        Ok(Self {
            form,
            ..self.clone()
        })
    }
}

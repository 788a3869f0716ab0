//! Scorecard for a `(P₊, P₋)` pair: reconstruction error, additional
//! curvature, nonzero counts and PSD margins.
//!
//! Numerical stability has no single metric; the relative reconstruction
//! error under ill-conditioned inputs serves as its proxy.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::chtwo::PivotLog;
use crate::eigen::{jacobi_eigen, nuclear_norm};
use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::pair::{Method, PairForm, PsdPair};

/// Largest dimension for which PSD margins are computed.
pub const PSD_CHECK_MAX_N: usize = 64;
/// Nonzero threshold relative to the largest entry of each counted matrix.
pub const NNZ_REL: f64 = 1e-12;
/// Relative reconstruction error accepted as correct.
pub const RECON_GATE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DecompositionReport {
    pub method: &'static str,
    pub n: usize,
    /// `‖A − (P₊ − P₋)‖_F / max(1, ‖A‖_F)`.
    pub recon_err_rel: f64,
    /// `Tr P₊ + Tr P₋ − ‖A‖_*`.
    pub curvature: f64,
    pub shift_t: Option<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "nnz_A"))]
    pub nnz_a: usize,
    #[cfg_attr(feature = "serde", serde(rename = "nnz_Pplus"))]
    pub nnz_pplus: usize,
    #[cfg_attr(feature = "serde", serde(rename = "nnz_Pminus"))]
    pub nnz_pminus: usize,
    #[cfg_attr(feature = "serde", serde(rename = "nnz_L1"))]
    pub nnz_l1: Option<usize>,
    #[cfg_attr(feature = "serde", serde(rename = "nnz_L2"))]
    pub nnz_l2: Option<usize>,
    /// Entries needed to store the pair: factor nonzeros, or the packed
    /// lower triangles of explicit parts.
    pub stored_nnz: usize,
    pub psd_margin_plus: Option<f64>,
    pub psd_margin_minus: Option<f64>,
    pub wall_time_ms: f64,
    pub pivot_log: Option<PivotLog>,
    pub config: Method,
}

impl DecompositionReport {
    pub fn with_pivot_log(mut self, log: PivotLog) -> Self {
        self.pivot_log = Some(log);
        self
    }

    pub fn passes_gate(&self) -> bool {
        self.recon_err_rel <= RECON_GATE
    }
}

/// Quantities of `A` shared by every report on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub n: usize,
    pub nuclear_norm: f64,
    pub frobenius_norm: f64,
    pub nnz: usize,
}

impl Reference {
    pub fn new(a: &SymMatrix) -> Result<Self> {
        Ok(Self {
            n: a.dim(),
            nuclear_norm: nuclear_norm(a)?,
            frobenius_norm: a.frobenius_norm(),
            nnz: a.count_nonzeros(NNZ_REL * a.max_abs()),
        })
    }
}

fn check_dim(a: &SymMatrix, pair: &PsdPair) -> Result<()> {
    if pair.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: pair.dim(),
        });
    }
    Ok(())
}

/// `Tr P₊ + Tr P₋ − ‖A‖_*`, with traces read off the factors.
pub fn curvature_overhead(pair: &PsdPair, a: &SymMatrix) -> Result<f64> {
    check_dim(a, pair)?;
    let (tp, tm) = pair.traces();
    Ok(tp + tm - nuclear_norm(a)?)
}

/// Scores `pair` as a representation of `a`.
pub fn evaluate(a: &SymMatrix, pair: &PsdPair, wall_time_ms: f64) -> Result<DecompositionReport> {
    evaluate_against(&Reference::new(a)?, a, pair, wall_time_ms)
}

/// [`evaluate`] with the spectral quantities of `a` precomputed.
pub fn evaluate_against(
    reference: &Reference,
    a: &SymMatrix,
    pair: &PsdPair,
    wall_time_ms: f64,
) -> Result<DecompositionReport> {
    check_dim(a, pair)?;
    let n = a.dim();
    let plus = pair.positive_part()?;
    let minus = pair.negative_part()?;
    let residual = a.sub(&plus.sub(&minus)?)?.frobenius_norm();
    let (tp, tm) = pair.traces();

    let count = |m: &SymMatrix| m.count_nonzeros(NNZ_REL * m.max_abs());
    let packed = |m: &SymMatrix| {
        let tol = NNZ_REL * m.max_abs();
        m.packed().iter().filter(|x| x.abs() > tol).count()
    };
    let (nnz_l1, nnz_l2) = match &pair.form {
        PairForm::Explicit { .. } => (None, None),
        PairForm::Factored { l1, l2 } | PairForm::FactoredLdl { l1, l2, .. } => (
            Some(l1.count_nonzeros(NNZ_REL * l1.max_abs())),
            Some(l2.count_nonzeros(NNZ_REL * l2.max_abs())),
        ),
    };
    let stored_nnz = match (nnz_l1, nnz_l2) {
        (Some(x), Some(y)) => x + y,
        _ => packed(&plus) + packed(&minus),
    };
    let (psd_margin_plus, psd_margin_minus) = if n <= PSD_CHECK_MAX_N {
        (
            jacobi_eigen(&plus).ok().map(|e| e.min()),
            jacobi_eigen(&minus).ok().map(|e| e.min()),
        )
    } else {
        (None, None)
    };

    Ok(DecompositionReport {
        method: pair.method.name(),
        n,
        recon_err_rel: residual / reference.frobenius_norm.max(1.0),
        curvature: tp + tm - reference.nuclear_norm,
        shift_t: pair.shift_t,
        nnz_a: reference.nnz,
        nnz_pplus: count(&plus),
        nnz_pminus: count(&minus),
        nnz_l1,
        nnz_l2,
        stored_nnz,
        psd_margin_plus,
        psd_margin_minus,
        wall_time_ms,
        pivot_log: None,
        config: pair.method.clone(),
    })
}

/// Ranks reports on the same matrix: correct before incorrect, then by
/// curvature, then by stored nonzeros. Equal keys keep input order.
pub fn compare(
    a: &SymMatrix,
    mut reports: Vec<DecompositionReport>,
) -> Result<Vec<DecompositionReport>> {
    if let Some(r) = reports.iter().find(|r| r.n != a.dim()) {
        return Err(Error::MixedInputs {
            first: a.dim(),
            other: r.n,
        });
    }
    reports.sort_by(|x, y| {
        let bucket = |r: &DecompositionReport| !r.passes_gate();
        bucket(x)
            .cmp(&bucket(y))
            .then_with(|| x.curvature.total_cmp(&y.curvature))
            .then_with(|| x.stored_nnz.cmp(&y.stored_nnz))
            .then(Ordering::Equal)
    });
    Ok(reports)
}

//! Difference-of-Cholesky factorization `A = L₁L₁ᵀ − L₂L₂ᵀ`.
//!
//! Each elimination step takes the pivot `a`, the column `v` below it and the
//! trailing block `M`, and emits one column into each factor:
//!
//! | branch     | when              | `L₁` column          | `L₂` column           | next Schur complement |
//! |------------|-------------------|----------------------|-----------------------|-----------------------|
//! | `ExactPos` | `a > tol`         | `(√a; v/√a)`         | `0`                   | `M − vvᵀ/a`           |
//! | `ExactNeg` | `a < −tol`        | `0`                  | `(√|a|; −v/√|a|)`     | `M + vvᵀ/|a|`         |
//! | `RegPos`   | `0 ≤ a ≤ tol`     | `(√(δ+a); v₁)`       | `(√δ; v₂)`            | `M − v₁v₁ᵀ + v₂v₂ᵀ`   |
//! | `RegNeg`   | `−tol ≤ a < 0`    | `(√δ; v₁)`           | `(√(δ+|a|); v₂)`      | `M − v₁v₁ᵀ + v₂v₂ᵀ`   |
//!
//! In the regularized branches `(v₁, v₂)` is any solution of
//! `√(δ+a) v₁ − √δ v₂ = v` (resp. `√δ v₁ − √(δ+|a|) v₂ = v`); [`VPolicy`]
//! picks one. Every policy makes `v₁` and `v₂` multiples of `v`, so each step
//! is a rank-one update of the Schur complement.
//!
//! The elimination runs square-root free: column `k` of each factor is kept
//! as a unit-diagonal vector `u` with weight `d`, i.e. `L = U · diag(√d)`.
//! With `sqrt_free` set the `(U, d)` pairs are returned as they are.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{DiagMatrix, LowerTriangular, Permutation, SymMatrix};
use crate::pair::{Method, PairForm, PsdPair};
use crate::pivot::{PivotStrategy, Schur};

/// Default regularization relative to `max|A|`.
pub const DELTA_REL: f64 = 1e-4;
/// Smallest default regularization.
pub const DELTA_FLOOR: f64 = 1e-12;
/// Default small-pivot threshold relative to `max|A|`.
pub const SMALL_PIVOT_REL: f64 = 1e-8;
/// Threshold for structural nonzeros seen by [`PivotStrategy::MinDegree`].
const NZ_REL: f64 = 1e-12;

/// Completion of the underdetermined `(v₁, v₂)` constraint in the
/// regularized branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum VPolicy {
    /// `v₁ = 0`: the off-diagonal mass goes to `L₂`.
    V1Zero,
    /// `v₂ = 0`: the off-diagonal mass goes to `L₁`.
    V2Zero,
    /// Minimum-norm solution.
    #[default]
    Balanced,
}

impl VPolicy {
    pub const ALL: [VPolicy; 3] = [VPolicy::V1Zero, VPolicy::V2Zero, VPolicy::Balanced];

    pub fn name(self) -> &'static str {
        match self {
            VPolicy::V1Zero => "v1zero",
            VPolicy::V2Zero => "v2zero",
            VPolicy::Balanced => "balanced",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ChtwoConfig {
    /// Regularization `δ > 0`, in eigenvalue units.
    pub delta: f64,
    /// Pivots with `|a| ≤ small_pivot_tol` take a regularized branch.
    pub small_pivot_tol: f64,
    pub v_policy: VPolicy,
    pub pivot: PivotStrategy,
    /// Return unit-diagonal factors with weights instead of `L₁, L₂`.
    pub sqrt_free: bool,
}

impl ChtwoConfig {
    /// Defaults scaled to `A`: `δ = max(1e-4 · max|A|, 1e-12)` and
    /// `small_pivot_tol = 1e-8 · max|A|`.
    pub fn for_matrix(a: &SymMatrix) -> Self {
        let scale = a.max_abs();
        Self {
            delta: (DELTA_REL * scale).max(DELTA_FLOOR),
            small_pivot_tol: SMALL_PIVOT_REL * scale,
            v_policy: VPolicy::default(),
            pivot: PivotStrategy::default(),
            sqrt_free: false,
        }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_small_pivot_tol(mut self, tol: f64) -> Self {
        self.small_pivot_tol = tol;
        self
    }

    pub fn with_v_policy(mut self, v_policy: VPolicy) -> Self {
        self.v_policy = v_policy;
        self
    }

    pub fn with_pivot(mut self, pivot: PivotStrategy) -> Self {
        self.pivot = pivot;
        self
    }

    pub fn with_sqrt_free(mut self, sqrt_free: bool) -> Self {
        self.sqrt_free = sqrt_free;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidConfig("delta must be positive and finite"));
        }
        if self.small_pivot_tol.is_nan() || self.small_pivot_tol < 0.0 {
            return Err(Error::InvalidConfig(
                "small pivot tolerance must be nonnegative",
            ));
        }
        Ok(())
    }
}

/// Which recursion a step used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Branch {
    ExactPos,
    ExactNeg,
    RegPos,
    RegNeg,
}

impl Branch {
    pub fn is_regularized(self) -> bool {
        matches!(self, Branch::RegPos | Branch::RegNeg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PivotRecord {
    pub step: usize,
    /// Row of the original matrix eliminated at this step.
    pub pivot_index: usize,
    pub pivot_value: f64,
    pub branch: Branch,
}

/// One record per elimination step.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct PivotLog {
    records: Vec<PivotRecord>,
}

impl PivotLog {
    pub fn records(&self) -> &[PivotRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn count(&self, branch: Branch) -> usize {
        self.records.iter().filter(|r| r.branch == branch).count()
    }

    pub fn any_regularized(&self) -> bool {
        self.records.iter().any(|r| r.branch.is_regularized())
    }
}

/// Weights and column multipliers for one step: column `k` of factor `i`
/// is `(1; cᵢ v)` with weight `dᵢ`, or absent when `dᵢ = 0`.
#[derive(Debug, Clone, Copy)]
struct Step {
    branch: Branch,
    d1: f64,
    c1: f64,
    d2: f64,
    c2: f64,
}

impl Step {
    fn new(a: f64, cfg: &ChtwoConfig) -> Self {
        let tol = cfg.small_pivot_tol;
        let delta = cfg.delta;
        if a > tol {
            return Self {
                branch: Branch::ExactPos,
                d1: a,
                c1: 1.0 / a,
                d2: 0.0,
                c2: 0.0,
            };
        }
        if a < -tol {
            let m = -a;
            return Self {
                branch: Branch::ExactNeg,
                d1: 0.0,
                c1: 0.0,
                d2: m,
                c2: -1.0 / m,
            };
        }
        // Regularized: weights (d1, d2) and the constraint d1 c1 − d2 c2 = 1.
        let (branch, d1, d2) = if a >= 0.0 {
            (Branch::RegPos, delta + a, delta)
        } else {
            (Branch::RegNeg, delta, delta - a)
        };
        let (c1, c2) = match cfg.v_policy {
            VPolicy::V1Zero => (0.0, -1.0 / d2),
            VPolicy::V2Zero => (1.0 / d1, 0.0),
            VPolicy::Balanced => {
                let s = d1 + d2;
                (1.0 / s, -1.0 / s)
            }
        };
        Self {
            branch,
            d1,
            c1,
            d2,
            c2,
        }
    }

    /// Coefficient of `vvᵀ` removed from the trailing block.
    fn gamma(&self) -> f64 {
        self.d1 * self.c1 * self.c1 - self.d2 * self.c2 * self.c2
    }
}

/// Difference-of-Cholesky factorization of any finite symmetric matrix.
///
/// Never fails on valid input: small and zero pivots go through the
/// δ-regularized branches. Errors only report an invalid configuration.
pub fn chtwo(a: &SymMatrix, cfg: &ChtwoConfig) -> Result<(PsdPair, PivotLog)> {
    cfg.validate()?;
    let n = a.dim();
    let nz_tol = NZ_REL * a.max_abs();

    let mut s = Schur::new(n, a.to_dense());
    let mut u1 = vec![0.0; n * n];
    let mut u2 = vec![0.0; n * n];
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut log = Vec::with_capacity(n);

    for k in 0..n {
        let p = s
            .select(cfg.pivot, k, nz_tol, |_| true)
            .expect("every pivot is admissible");
        if p != k {
            s.swap(k, k, p);
            perm.swap(k, p);
            for c in 0..k {
                u1.swap(k * n + c, p * n + c);
                u2.swap(k * n + c, p * n + c);
            }
        }
        let pivot = s.at(k, k);
        let step = Step::new(pivot, cfg);
        d1[k] = step.d1;
        d2[k] = step.d2;
        if step.d1 > 0.0 {
            u1[k * n + k] = 1.0;
            for r in k + 1..n {
                u1[r * n + k] = step.c1 * s.at(r, k);
            }
        }
        if step.d2 > 0.0 {
            u2[k * n + k] = 1.0;
            for r in k + 1..n {
                u2[r * n + k] = step.c2 * s.at(r, k);
            }
        }
        s.rank_one_update(k, step.gamma());
        log.push(PivotRecord {
            step: k,
            pivot_index: perm[k],
            pivot_value: pivot,
            branch: step.branch,
        });
    }

    let u1 = LowerTriangular::from_row_major_lower(n, &u1)?;
    let u2 = LowerTriangular::from_row_major_lower(n, &u2)?;
    let form = if cfg.sqrt_free {
        PairForm::FactoredLdl {
            l1: u1,
            d1: DiagMatrix::new(d1)?,
            l2: u2,
            d2: DiagMatrix::new(d2)?,
        }
    } else {
        let root = |d: &[f64]| -> Vec<f64> { d.iter().map(|&x| libm::sqrt(x)).collect() };
        PairForm::Factored {
            l1: u1.scale_columns(&root(&d1))?,
            l2: u2.scale_columns(&root(&d2))?,
        }
    };
    let pair = PsdPair {
        form,
        perm: Permutation::new(perm)?,
        method: Method::Chtwo(*cfg),
        shift_t: None,
    };
    Ok((pair, PivotLog { records: log }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{jacobi_eigen, psd_tol};
    use crate::generate::{random_psd, random_symmetric, sprand, SplitMix};
    use crate::ldl::{cholesky, ldl_split};
    use crate::matrix::{reconstruct_difference, sym_from_dense};

    fn factors(p: &PsdPair) -> (&LowerTriangular, &LowerTriangular) {
        match &p.form {
            PairForm::Factored { l1, l2 } => (l1, l2),
            f => panic!("expected factored form, got {f:?}"),
        }
    }

    fn cfg(a: &SymMatrix) -> ChtwoConfig {
        ChtwoConfig::for_matrix(a)
    }

    fn max_entry_diff(a: &LowerTriangular, b: &LowerTriangular) -> f64 {
        a.packed()
            .iter()
            .zip(b.packed())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn diagonal_input_uses_exact_branches() {
        let a = SymMatrix::from_diagonal(&[4.0, -9.0]);
        let c = cfg(&a).with_pivot(PivotStrategy::Natural);
        let (p, log) = chtwo(&a, &c).unwrap();
        let (l1, l2) = factors(&p);
        assert_eq!(l1.to_rows(), [[2.0, 0.0], [0.0, 0.0]]);
        assert_eq!(l2.to_rows(), [[0.0, 0.0], [0.0, 3.0]]);
        assert_eq!(log.count(Branch::ExactPos), 1);
        assert_eq!(log.count(Branch::ExactNeg), 1);
    }

    #[test]
    fn swap_matrix_v1zero_worked_example() {
        let a = sym_from_dense(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let c = cfg(&a)
            .with_delta(1.0)
            .with_v_policy(VPolicy::V1Zero)
            .with_pivot(PivotStrategy::Natural);
        let (p, log) = chtwo(&a, &c).unwrap();
        let (l1, l2) = factors(&p);
        assert_eq!(l1.to_rows(), [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(l2.to_rows(), [[1.0, 0.0], [-1.0, 0.0]]);
        let branches: Vec<Branch> = log.records().iter().map(|r| r.branch).collect();
        assert_eq!(branches, [Branch::RegPos, Branch::ExactPos]);
        assert_eq!(log.records()[1].pivot_value, 1.0);
        assert_eq!(reconstruct_difference(l1, l2, &p.perm).unwrap(), a);
    }

    #[test]
    fn regularized_branch_constraints() {
        // One step on [[a, v], [v, m]] must satisfy the column constraint
        // exactly for every policy, in both sign cases.
        for (a0, tol) in [(1e-9, 1e-6), (-1e-9, 1e-6), (0.0, 0.0)] {
            let a = sym_from_dense(&[[a0, 2.0], [2.0, 5.0]]).unwrap();
            for pol in VPolicy::ALL {
                let c = ChtwoConfig::for_matrix(&a)
                    .with_delta(0.5)
                    .with_small_pivot_tol(tol)
                    .with_v_policy(pol)
                    .with_pivot(PivotStrategy::Natural);
                let (p, log) = chtwo(&a, &c).unwrap();
                assert!(log.records()[0].branch.is_regularized());
                let (l1, l2) = factors(&p);
                let lhs = l1.get(0, 0) * l1.get(1, 0) - l2.get(0, 0) * l2.get(1, 0);
                assert!((lhs - 2.0).abs() < 1e-14, "{pol:?} a={a0}");
                assert!((l1.get(0, 0).powi(2) - l2.get(0, 0).powi(2) - a0).abs() < 1e-15);
                match pol {
                    VPolicy::V1Zero => assert_eq!(l1.get(1, 0), 0.0),
                    VPolicy::V2Zero => assert_eq!(l2.get(1, 0), 0.0),
                    VPolicy::Balanced => {
                        // Minimum norm: (v1, v2) parallel to (α, −β).
                        let (al, be) = (l1.get(0, 0), l2.get(0, 0));
                        assert!((l1.get(1, 0) * be + l2.get(1, 0) * al).abs() < 1e-14);
                    }
                }
                let err = a.sub(&p.reconstruct().unwrap()).unwrap().max_abs();
                assert!(err < 1e-14);
            }
        }
    }

    #[test]
    fn zero_matrix_gives_scaled_identities() {
        let a = SymMatrix::zeros(5);
        for pol in VPolicy::ALL {
            let c = cfg(&a).with_v_policy(pol);
            assert_eq!(c.delta, DELTA_FLOOR);
            let (p, log) = chtwo(&a, &c).unwrap();
            let (l1, l2) = factors(&p);
            let want = LowerTriangular::from_diagonal(&[libm::sqrt(DELTA_FLOOR); 5]);
            assert_eq!(l1, &want);
            assert_eq!(l2, &want);
            assert_eq!(log.count(Branch::RegPos), 5);
        }
    }

    #[test]
    fn one_by_one_cases() {
        for (x, l1, l2, branch) in [
            (4.0, 2.0, 0.0, Branch::ExactPos),
            (-4.0, 0.0, 2.0, Branch::ExactNeg),
        ] {
            let a = SymMatrix::from_diagonal(&[x]);
            let (p, log) = chtwo(&a, &cfg(&a)).unwrap();
            let (f1, f2) = factors(&p);
            assert_eq!((f1.get(0, 0), f2.get(0, 0)), (l1, l2));
            assert_eq!(log.records()[0].branch, branch);
        }
    }

    #[test]
    fn psd_input_reduces_to_cholesky() {
        let mut rng = SplitMix::new(31);
        for n in 1..=12 {
            let a = random_psd(n, &mut rng);
            let c = cfg(&a).with_pivot(PivotStrategy::Natural);
            let (p, log) = chtwo(&a, &c).unwrap();
            assert_eq!(log.count(Branch::ExactPos), n);
            let (l1, l2) = factors(&p);
            assert_eq!(l2.max_abs(), 0.0);
            assert!(max_entry_diff(l1, &cholesky(&a).unwrap()) <= 1e-8);
        }
    }

    #[test]
    fn matches_ldl_split_without_regularization() {
        let mut rng = SplitMix::new(32);
        let mut checked = 0;
        for case in 0..60 {
            let a = random_symmetric(1 + case % 10, &mut rng);
            for pivot in [PivotStrategy::Natural, PivotStrategy::MaxDiagMagnitude] {
                let c = cfg(&a).with_pivot(pivot);
                let (p, log) = chtwo(&a, &c).unwrap();
                let Ok(q) = ldl_split(&a, pivot) else {
                    continue;
                };
                if log.any_regularized() {
                    continue;
                }
                assert_eq!(p.perm, q.perm);
                let q = q.to_factored().unwrap();
                let ((a1, a2), (b1, b2)) = (factors(&p), factors(&q));
                let scale = a1.max_abs().max(a2.max_abs()).max(1.0);
                assert!(max_entry_diff(a1, b1) <= 1e-10 * scale);
                assert!(max_entry_diff(a2, b2) <= 1e-10 * scale);
                checked += 1;
            }
        }
        assert!(checked > 80);
    }

    #[test]
    fn sqrt_free_variant_converts_back() {
        let mut rng = SplitMix::new(33);
        for case in 0..40 {
            let a = sprand(2 + case % 9, 0.4, &mut rng);
            for pol in VPolicy::ALL {
                let c = cfg(&a).with_v_policy(pol).with_small_pivot_tol(0.3);
                let (p, log) = chtwo(&a, &c).unwrap();
                let (q, log_q) = chtwo(&a, &c.with_sqrt_free(true)).unwrap();
                assert_eq!(log, log_q);
                let PairForm::FactoredLdl { d1, d2, .. } = &q.form else {
                    panic!()
                };
                for (r, (&x, &y)) in log
                    .records()
                    .iter()
                    .zip(d1.values().iter().zip(d2.values()))
                {
                    if r.branch.is_regularized() {
                        assert!(x > 0.0 && y > 0.0);
                    }
                    assert!(x >= 0.0 && y >= 0.0);
                }
                let conv = q.to_factored().unwrap();
                let ((a1, a2), (b1, b2)) = (factors(&p), factors(&conv));
                assert!(max_entry_diff(a1, b1) <= 1e-10 && max_entry_diff(a2, b2) <= 1e-10);
            }
        }
    }

    #[test]
    fn fuzzed_pairs_reconstruct_and_are_psd() {
        let mut rng = SplitMix::new(34);
        for case in 0..150 {
            let n = 1 + case % 12;
            let a = if case % 3 == 0 {
                sprand(n, 0.3, &mut rng)
            } else {
                random_symmetric(n, &mut rng)
            };
            for pol in VPolicy::ALL {
                for pivot in PivotStrategy::ALL {
                    let c = cfg(&a).with_v_policy(pol).with_pivot(pivot);
                    let (p, log) = chtwo(&a, &c).unwrap();
                    assert_eq!(log.len(), n);
                    let err = a.sub(&p.reconstruct().unwrap()).unwrap().frobenius_norm();
                    assert!(err <= 1e-8 * a.frobenius_norm().max(1.0));
                    let tol = psd_tol(&a);
                    assert!(jacobi_eigen(&p.positive_part().unwrap()).unwrap().min() >= -tol);
                    assert!(jacobi_eigen(&p.negative_part().unwrap()).unwrap().min() >= -tol);
                }
            }
        }
    }

    #[test]
    fn deterministic_log() {
        let a = random_symmetric(9, &mut SplitMix::new(35));
        let c = cfg(&a)
            .with_pivot(PivotStrategy::MinDegree)
            .with_small_pivot_tol(0.5);
        assert_eq!(chtwo(&a, &c).unwrap(), chtwo(&a, &c).unwrap());
    }

    #[test]
    fn rejects_bad_config() {
        let a = SymMatrix::identity(2);
        assert!(chtwo(&a, &cfg(&a).with_delta(0.0)).is_err());
        assert!(chtwo(&a, &cfg(&a).with_delta(f64::NAN)).is_err());
        assert!(chtwo(&a, &cfg(&a).with_small_pivot_tol(-1.0)).is_err());
    }
}

//! Symmetric pivot selection over a dense Schur complement.

use alloc::vec::Vec;

/// Rule for choosing the next diagonal pivot from the remaining Schur
/// complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum PivotStrategy {
    /// Eliminate in the given order.
    Natural,
    /// Largest remaining `|diagonal|`.
    #[default]
    #[cfg_attr(feature = "serde", serde(rename = "maxdiag"))]
    MaxDiagMagnitude,
    /// Fewest off-diagonal nonzeros in the pivot row, then largest `|diagonal|`.
    #[cfg_attr(feature = "serde", serde(rename = "mindegree"))]
    MinDegree,
}

impl PivotStrategy {
    pub const ALL: [PivotStrategy; 3] = [
        PivotStrategy::Natural,
        PivotStrategy::MaxDiagMagnitude,
        PivotStrategy::MinDegree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PivotStrategy::Natural => "natural",
            PivotStrategy::MaxDiagMagnitude => "maxdiag",
            PivotStrategy::MinDegree => "mindegree",
        }
    }
}

/// Full row-major `n × n` working copy of a symmetric matrix whose trailing
/// block `k..n` holds the current Schur complement.
#[derive(Debug, Clone)]
pub(crate) struct Schur {
    pub n: usize,
    pub m: Vec<f64>,
}

impl Schur {
    pub fn new(n: usize, m: Vec<f64>) -> Self {
        debug_assert_eq!(m.len(), n * n);
        Self { n, m }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.m[i * self.n + j]
    }

    /// Symmetric swap of rows/columns `i` and `j`, restricted to the active
    /// block starting at `k`.
    pub fn swap(&mut self, k: usize, i: usize, j: usize) {
        if i == j {
            return;
        }
        let n = self.n;
        for c in k..n {
            self.m.swap(i * n + c, j * n + c);
        }
        for r in k..n {
            self.m.swap(r * n + i, r * n + j);
        }
    }

    /// `S[k+1.., k+1..] -= gamma · v vᵀ` where `v = S[k+1.., k]`.
    pub fn rank_one_update(&mut self, k: usize, gamma: f64) {
        if gamma == 0.0 {
            return;
        }
        let n = self.n;
        let v: Vec<f64> = (k + 1..n).map(|r| self.m[r * n + k]).collect();
        for (ri, r) in (k + 1..n).enumerate() {
            let s = gamma * v[ri];
            if s == 0.0 {
                continue;
            }
            let row = &mut self.m[r * n + k + 1..r * n + n];
            for (x, vc) in row.iter_mut().zip(&v) {
                *x -= s * vc;
            }
        }
    }

    /// Largest `|x|` in the active block.
    pub fn active_max_abs(&self, k: usize) -> f64 {
        let n = self.n;
        let mut m = 0.0f64;
        for r in k..n {
            for c in k..n {
                m = m.max(self.m[r * n + c].abs());
            }
        }
        m
    }

    fn degree(&self, k: usize, i: usize, nz_tol: f64) -> usize {
        let n = self.n;
        (k..n)
            .filter(|&c| c != i && self.m[i * n + c].abs() > nz_tol)
            .count()
    }

    /// Index in `k..n` of the next pivot, or `None` if `usable` rejects every
    /// candidate considered.
    pub fn select(
        &self,
        strategy: PivotStrategy,
        k: usize,
        nz_tol: f64,
        usable: impl Fn(f64) -> bool,
    ) -> Option<usize> {
        let n = self.n;
        match strategy {
            PivotStrategy::Natural => Some(k),
            PivotStrategy::MaxDiagMagnitude => {
                let mut best = k;
                for i in k + 1..n {
                    if self.at(i, i).abs() > self.at(best, best).abs() {
                        best = i;
                    }
                }
                usable(self.at(best, best)).then_some(best)
            }
            PivotStrategy::MinDegree => {
                let mut best: Option<(usize, usize)> = None;
                for i in k..n {
                    let d = self.at(i, i);
                    if !usable(d) {
                        continue;
                    }
                    let deg = self.degree(k, i, nz_tol);
                    let better = match best {
                        None => true,
                        Some((b, bdeg)) => {
                            deg < bdeg || (deg == bdeg && d.abs() > self.at(b, b).abs())
                        }
                    };
                    if better {
                        best = Some((i, deg));
                    }
                }
                best.map(|(i, _)| i)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn schur(rows: &[&[f64]]) -> Schur {
        let n = rows.len();
        Schur::new(n, rows.iter().flat_map(|r| r.iter().copied()).collect())
    }

    #[test]
    fn max_diag_prefers_first_on_ties() {
        let s = schur(&[&[2.0, 4.0], &[4.0, -2.0]]);
        assert_eq!(
            s.select(PivotStrategy::MaxDiagMagnitude, 0, 0.0, |_| true),
            Some(0)
        );
        let s = schur(&[&[1.0, 0.0, 0.0], &[0.0, -3.0, 0.0], &[0.0, 0.0, 2.0]]);
        assert_eq!(
            s.select(PivotStrategy::MaxDiagMagnitude, 0, 0.0, |_| true),
            Some(1)
        );
        assert_eq!(
            s.select(PivotStrategy::MaxDiagMagnitude, 0, 0.0, |d| d.abs() > 5.0),
            None
        );
    }

    #[test]
    fn min_degree_counts_active_row() {
        // Arrow matrix: row 0 is dense, the others touch only row 0.
        let s = schur(&[
            &[5.0, 1.0, 1.0, 1.0],
            &[1.0, 1.0, 0.0, 0.0],
            &[1.0, 0.0, 3.0, 0.0],
            &[1.0, 0.0, 0.0, 2.0],
        ]);
        assert_eq!(
            s.select(PivotStrategy::MinDegree, 0, 0.0, |_| true),
            Some(2)
        );
        assert_eq!(
            s.select(PivotStrategy::MinDegree, 0, 0.0, |d| d < 2.5),
            Some(3)
        );
        assert_eq!(s.select(PivotStrategy::Natural, 1, 0.0, |_| false), Some(1));
    }

    #[test]
    fn swap_and_update() {
        let mut s = schur(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 5.0], &[3.0, 5.0, 6.0]]);
        s.swap(0, 0, 2);
        assert_eq!(s.m, vec![6.0, 5.0, 3.0, 5.0, 4.0, 2.0, 3.0, 2.0, 1.0]);
        s.rank_one_update(0, 1.0 / 6.0);
        assert!((s.at(1, 1) - (4.0 - 25.0 / 6.0)).abs() < 1e-15);
        assert!((s.at(2, 1) - (2.0 - 15.0 / 6.0)).abs() < 1e-15);
        assert_eq!(s.at(1, 2), s.at(2, 1));
    }
}

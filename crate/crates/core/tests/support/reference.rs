//! Literal recursive difference-of-Cholesky, written directly from the
//! block recursion on `[[a, vᵀ], [v, M]]` with no pivoting. Test-only oracle
//! for the iterative implementation.

#![allow(dead_code)]

use psdsplit_core::VPolicy;

pub type Dense = Vec<Vec<f64>>;

/// Returns `(L₁, L₂)` as dense row-major lower-triangular matrices.
pub fn chtwo_recursive(a: &Dense, delta: f64, tol: f64, policy: VPolicy) -> (Dense, Dense) {
    let n = a.len();
    if n == 0 {
        return (vec![], vec![]);
    }
    let a0 = a[0][0];
    let v: Vec<f64> = (1..n).map(|i| a[i][0]).collect();
    let m: Dense = (1..n).map(|i| (1..n).map(|j| a[i][j]).collect()).collect();

    let (d1, col1, d2, col2, next): (f64, Vec<f64>, f64, Vec<f64>, Dense) = if a0 > tol {
        let s = a0.sqrt();
        let next = outer_update(&m, &[(&v, -1.0 / a0)]);
        (
            s,
            v.iter().map(|x| x / s).collect(),
            0.0,
            vec![0.0; n - 1],
            next,
        )
    } else if a0 < -tol {
        let s = (-a0).sqrt();
        let next = outer_update(&m, &[(&v, 1.0 / -a0)]);
        (
            0.0,
            vec![0.0; n - 1],
            s,
            v.iter().map(|x| -x / s).collect(),
            next,
        )
    } else {
        // α v₁ − β v₂ = v with (α, β) = (√(δ+a), √δ) or (√δ, √(δ+|a|)).
        let (alpha, beta) = if a0 >= 0.0 {
            ((delta + a0).sqrt(), delta.sqrt())
        } else {
            (delta.sqrt(), (delta - a0).sqrt())
        };
        let (v1, v2): (Vec<f64>, Vec<f64>) = match policy {
            VPolicy::V1Zero => (vec![0.0; n - 1], v.iter().map(|x| -x / beta).collect()),
            VPolicy::V2Zero => (v.iter().map(|x| x / alpha).collect(), vec![0.0; n - 1]),
            VPolicy::Balanced => {
                let s = alpha * alpha + beta * beta;
                (
                    v.iter().map(|x| alpha * x / s).collect(),
                    v.iter().map(|x| -beta * x / s).collect(),
                )
            }
        };
        let next = outer_update(&m, &[(&v1, -1.0), (&v2, 1.0)]);
        (alpha, v1, beta, v2, next)
    };

    let (s, t) = chtwo_recursive(&next, delta, tol, policy);
    (assemble(d1, &col1, &s), assemble(d2, &col2, &t))
}

/// `M + Σ cₖ uₖ uₖᵀ`.
fn outer_update(m: &Dense, terms: &[(&Vec<f64>, f64)]) -> Dense {
    let mut out = m.clone();
    for (u, c) in terms {
        for i in 0..out.len() {
            for j in 0..out.len() {
                out[i][j] += c * u[i] * u[j];
            }
        }
    }
    out
}

fn assemble(diag: f64, col: &[f64], rest: &Dense) -> Dense {
    let n = col.len() + 1;
    let mut l = vec![vec![0.0; n]; n];
    l[0][0] = diag;
    for i in 1..n {
        l[i][0] = col[i - 1];
        for j in 1..n {
            l[i][j] = rest[i - 1][j - 1];
        }
    }
    l
}

pub fn max_abs_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

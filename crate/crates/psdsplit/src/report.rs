//! Rendering of scorecards: pretty JSON, an aligned text table, and the CSV
//! written by the δ sweep.

use std::fmt::Write as _;

use psdsplit_core::{Branch, DecompositionReport};
use serde::Serialize;

/// A method that produced no pair, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub method: &'static str,
    pub reason: String,
}

/// Output of `compare`: reports best first, then skipped methods.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub ranking: Vec<DecompositionReport>,
    pub skipped: Vec<Skipped>,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize without error")
}

fn opt_num(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |x| format!("{x:.3e}"))
}

fn opt_count(x: Option<usize>) -> String {
    x.map_or_else(|| "-".to_string(), |x| x.to_string())
}

const HEADER: [&str; 11] = [
    "rank",
    "method",
    "recon_err_rel",
    "curvature",
    "shift_t",
    "nnz_P+",
    "nnz_P-",
    "nnz_L1",
    "nnz_L2",
    "gate",
    "time_ms",
];

fn row(rank: usize, r: &DecompositionReport) -> [String; 11] {
    [
        rank.to_string(),
        r.method.to_string(),
        format!("{:.3e}", r.recon_err_rel),
        format!("{:.4e}", r.curvature),
        opt_num(r.shift_t),
        r.nnz_pplus.to_string(),
        r.nnz_pminus.to_string(),
        opt_count(r.nnz_l1),
        opt_count(r.nnz_l2),
        if r.passes_gate() { "pass" } else { "FAIL" }.to_string(),
        format!("{:.3}", r.wall_time_ms),
    ]
}

/// Aligned table, one row per report in the given order.
pub fn table(reports: &[DecompositionReport], skipped: &[Skipped]) -> String {
    let rows: Vec<[String; 11]> = reports
        .iter()
        .enumerate()
        .map(|(i, r)| row(i + 1, r))
        .collect();
    let mut width = HEADER.map(str::len);
    for r in &rows {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(width).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            // Text columns left-aligned, numbers right-aligned.
            if i == 1 || i == 9 {
                let _ = write!(s, "{cell:<w$}");
            } else {
                let _ = write!(s, "{cell:>w$}");
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(&HEADER.map(String::from));
    for r in &rows {
        line(r);
    }
    if let Some(r) = reports.first() {
        let _ = writeln!(out, "n = {}, nnz(A) = {}", r.n, r.nnz_a);
    }
    for s in skipped {
        let _ = writeln!(out, "skipped {}: {}", s.method, s.reason);
    }
    out
}

/// Single-report table with a summary of the pivot log, if any.
pub fn single_table(r: &DecompositionReport) -> String {
    let mut out = table(std::slice::from_ref(r), &[]);
    if let Some(log) = &r.pivot_log {
        let _ = writeln!(
            out,
            "pivots: {} exact positive, {} exact negative, {} regularized positive, {} regularized negative",
            log.count(Branch::ExactPos),
            log.count(Branch::ExactNeg),
            log.count(Branch::RegPos),
            log.count(Branch::RegNeg),
        );
    }
    if let (Some(p), Some(m)) = (r.psd_margin_plus, r.psd_margin_minus) {
        let _ = writeln!(out, "smallest eigenvalues: P+ {p:.3e}, P- {m:.3e}");
    }
    out
}

/// One row of the δ sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub delta: f64,
    pub recon_err_rel: f64,
    pub curvature: f64,
    pub nnz_l1: usize,
    pub nnz_l2: usize,
    pub wall_time_ms: f64,
}

pub const SWEEP_HEADER: &str = "delta,recon_err_rel,curvature,nnz_L1,nnz_L2,wall_time_ms";

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{:e},{:e},{:e},{},{},{}",
            self.delta,
            self.recon_err_rel,
            self.curvature,
            self.nnz_l1,
            self.nnz_l2,
            self.wall_time_ms
        )
    }
}

//! The `psdsplit` command.
//!
//! Exit codes: 0 when the reconstruction gate passes, 1 when it fails or a
//! solver does not converge, 2 for IO, parse and usage errors, 3 when
//! diagonal-pivoting LDLᵀ breaks down.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use psdsplit_core::generate::{banded, illcond, random_symmetric, sprand, SplitMix};
use psdsplit_core::metrics::{evaluate_against, Reference};
use psdsplit_core::{
    chtwo, compare, eigen_split, ldl_split, shift_split_with, ChtwoConfig, DecompositionReport,
    PivotLog, PivotStrategy, PsdPair, ShiftBound, SymMatrix, VPolicy,
};

use crate::report::{self, Comparison, Skipped, SweepRow, SWEEP_HEADER};
use crate::{mm, output};

pub const EXIT_OK: i32 = 0;
pub const EXIT_GATE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BREAKDOWN: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "psdsplit",
    version,
    about = "Split a symmetric matrix into a difference of PSD matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose one matrix and write the factors, permutation and report.
    Decompose(DecomposeArgs),
    /// Run every method on one matrix and rank the results.
    Compare(CompareArgs),
    /// Run the Cholesky-difference method over a grid of δ values (CSV).
    SweepDelta(SweepArgs),
    /// Generate a random symmetric test matrix.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Shift,
    Eigen,
    Ldl,
    Chtwo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VPolicyArg {
    V1zero,
    V2zero,
    Balanced,
}

impl From<VPolicyArg> for VPolicy {
    fn from(v: VPolicyArg) -> Self {
        match v {
            VPolicyArg::V1zero => VPolicy::V1Zero,
            VPolicyArg::V2zero => VPolicy::V2Zero,
            VPolicyArg::Balanced => VPolicy::Balanced,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PivotArg {
    Natural,
    Maxdiag,
    Mindegree,
}

impl From<PivotArg> for PivotStrategy {
    fn from(p: PivotArg) -> Self {
        match p {
            PivotArg::Natural => PivotStrategy::Natural,
            PivotArg::Maxdiag => PivotStrategy::MaxDiagMagnitude,
            PivotArg::Mindegree => PivotStrategy::MinDegree,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundArg {
    Gershgorin,
    Exact,
}

impl From<BoundArg> for ShiftBound {
    fn from(b: BoundArg) -> Self {
        match b {
            BoundArg::Gershgorin => ShiftBound::Gershgorin,
            BoundArg::Exact => ShiftBound::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Default, Args)]
pub struct MethodOptions {
    /// Absolute regularization δ (chtwo). Default: 1e-4·max|A|, at least 1e-12.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Pivots with |a| at or below this take a regularized step (chtwo).
    #[arg(long)]
    pub small_pivot_tol: Option<f64>,
    /// Identity shift margin added to t (shift).
    #[arg(long)]
    pub margin: Option<f64>,
    #[arg(long, value_enum)]
    pub v_policy: Option<VPolicyArg>,
    /// Symmetric pivoting (ldl, chtwo).
    #[arg(long, value_enum)]
    pub pivot: Option<PivotArg>,
    /// Spectral bounds used to size the shift (shift).
    #[arg(long, value_enum)]
    pub shift_bound: Option<BoundArg>,
    /// Write unit-diagonal factors with separate weights (chtwo).
    #[arg(long)]
    pub sqrt_free: bool,
}

impl MethodOptions {
    fn chtwo_config(&self, a: &SymMatrix) -> ChtwoConfig {
        let mut cfg = ChtwoConfig::for_matrix(a).with_sqrt_free(self.sqrt_free);
        if let Some(d) = self.delta {
            cfg = cfg.with_delta(d);
        }
        if let Some(t) = self.small_pivot_tol {
            cfg = cfg.with_small_pivot_tol(t);
        }
        if let Some(v) = self.v_policy {
            cfg = cfg.with_v_policy(v.into());
        }
        if let Some(p) = self.pivot {
            cfg = cfg.with_pivot(p.into());
        }
        cfg
    }

    /// Flags given that do not apply to `method`.
    fn foreign_flags(&self, method: MethodArg) -> Vec<&'static str> {
        let mut bad = Vec::new();
        let chtwo = method == MethodArg::Chtwo;
        let shift = method == MethodArg::Shift;
        let pivoted = matches!(method, MethodArg::Ldl | MethodArg::Chtwo);
        for (given, ok, name) in [
            (self.delta.is_some(), chtwo, "--delta"),
            (self.small_pivot_tol.is_some(), chtwo, "--small-pivot-tol"),
            (self.v_policy.is_some(), chtwo, "--v-policy"),
            (self.sqrt_free, chtwo, "--sqrt-free"),
            (self.pivot.is_some(), pivoted, "--pivot"),
            (self.margin.is_some(), shift, "--margin"),
            (self.shift_bound.is_some(), shift, "--shift-bound"),
        ] {
            if given && !ok {
                bad.push(name);
            }
        }
        bad
    }
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long, value_enum, default_value = "chtwo")]
    pub method: MethodArg,
    #[command(flatten)]
    pub options: MethodOptions,
    /// Prefix for the output files. Default: the input path without extension.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Matrix Market file holding a symmetric matrix.
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub options: MethodOptions,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub v_policy: Option<VPolicyArg>,
    #[arg(long, value_enum)]
    pub pivot: Option<PivotArg>,
    #[arg(long)]
    pub small_pivot_tol: Option<f64>,
    /// Smallest δ, relative to max|A|.
    #[arg(long, default_value_t = 1e-8)]
    pub min: f64,
    /// Largest δ, relative to max|A|.
    #[arg(long, default_value_t = 1.0)]
    pub max: f64,
    /// Number of log-spaced grid points.
    #[arg(long, default_value_t = 9)]
    pub points: usize,
    /// CSV destination. Default: standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    pub input: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Dense, N(0,1) entries.
    Random,
    /// N(0,1) entries within bandwidth k.
    Banded,
    /// Gaussian diagonal, off-diagonal pairs with probability p.
    Sprand,
    /// Prescribed condition number, random eigenvalue signs.
    Illcond,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[arg(short, long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Bandwidth (banded). Default 1.
    #[arg(long)]
    pub k: Option<usize>,
    /// Off-diagonal density (sprand). Default 0.1.
    #[arg(long)]
    pub p: Option<f64>,
    /// Condition number (illcond). Default 1e6.
    #[arg(long)]
    pub cond: Option<f64>,
    /// Positive definite instead of indefinite (illcond).
    #[arg(long)]
    pub definite: bool,
    /// Destination file. Default: standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// A failed command: exit code and message for standard error.
#[derive(Debug)]
struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::Matrix(e) => e.into(),
            e => Failure::usage(e.to_string()),
        }
    }
}

impl From<psdsplit_core::Error> for Failure {
    fn from(e: psdsplit_core::Error) -> Self {
        use psdsplit_core::Error as E;
        let code = match e {
            E::PivotBreakdown { .. } => EXIT_BREAKDOWN,
            E::NoConvergence { .. } => EXIT_GATE,
            _ => EXIT_USAGE,
        };
        let mut msg = e.to_string();
        if code == EXIT_BREAKDOWN {
            msg.push_str("; use --method chtwo, which handles singular and indefinite pivots");
        }
        Self { code, msg }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::usage(format!("{}: {e}", path.display()))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Decompose(a) => decompose(&a, out),
        Command::Compare(a) => compare_cmd(&a, out),
        Command::SweepDelta(a) => sweep_delta(&a, out),
        Command::Gen(a) => gen(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "psdsplit: {}", f.msg);
            f.code
        }
    }
}

/// Runs one method, timing the split only.
fn split(
    a: &SymMatrix,
    method: MethodArg,
    opts: &MethodOptions,
) -> Result<(PsdPair, Option<PivotLog>, f64), psdsplit_core::Error> {
    let start = Instant::now();
    let (pair, log) = match method {
        MethodArg::Shift => (
            shift_split_with(
                a,
                opts.margin.unwrap_or(0.0),
                opts.shift_bound.map_or(ShiftBound::default(), Into::into),
            )?,
            None,
        ),
        MethodArg::Eigen => (eigen_split(a)?, None),
        MethodArg::Ldl => (
            ldl_split(a, opts.pivot.map_or(PivotStrategy::default(), Into::into))?,
            None,
        ),
        MethodArg::Chtwo => {
            let (pair, log) = chtwo(a, &opts.chtwo_config(a))?;
            (pair, Some(log))
        }
    };
    Ok((pair, log, start.elapsed().as_secs_f64() * 1e3))
}

fn scored(
    reference: &Reference,
    a: &SymMatrix,
    method: MethodArg,
    opts: &MethodOptions,
) -> Result<(PsdPair, DecompositionReport), psdsplit_core::Error> {
    let (pair, log, ms) = split(a, method, opts)?;
    let mut r = evaluate_against(reference, a, &pair, ms)?;
    if let Some(log) = log {
        r = r.with_pivot_log(log);
    }
    Ok((pair, r))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| io_failure(Path::new("<stdout>"), e))
}

fn decompose(args: &DecomposeArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let bad = args.options.foreign_flags(args.method);
    if !bad.is_empty() {
        return Err(Failure::usage(format!(
            "{} not applicable to --method {}",
            bad.join(", "),
            args.method
                .to_possible_value()
                .expect("no skipped variants")
                .get_name()
        )));
    }
    let a = mm::read_sym(&args.input)?;
    let reference = Reference::new(&a)?;
    let (pair, r) = scored(&reference, &a, args.method, &args.options)?;

    let prefix = args
        .output
        .clone()
        .unwrap_or_else(|| output::default_prefix(&args.input));
    output::write_pair(&prefix, &pair)?;
    output::write_report(&output::with_suffix(&prefix, ".report.json"), &r)?;

    match args.format {
        Format::Json => emit(out, &(report::to_json(&r) + "\n"))?,
        Format::Table => emit(out, &report::single_table(&r))?,
    }
    Ok(if r.passes_gate() { EXIT_OK } else { EXIT_GATE })
}

fn compare_cmd(args: &CompareArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let a = mm::read_sym(&args.input)?;
    let reference = Reference::new(&a)?;
    let methods = [
        MethodArg::Shift,
        MethodArg::Eigen,
        MethodArg::Ldl,
        MethodArg::Chtwo,
    ];

    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = methods
            .iter()
            .map(|&m| {
                let (a, reference, opts) = (&a, &reference, &args.options);
                s.spawn(move || scored(reference, a, m, opts).map(|(_, r)| r))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("method thread panicked"))
            .collect()
    });

    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for (&m, res) in methods.iter().zip(results) {
        use psdsplit_core::Error as E;
        match res {
            Ok(r) => reports.push(r),
            Err(e @ (E::PivotBreakdown { .. } | E::NoConvergence { .. })) => {
                skipped.push(Skipped {
                    method: method_name(m),
                    reason: e.to_string(),
                })
            }
            Err(e) => return Err(e.into()),
        }
    }
    let ranking = compare(&a, reports)?;
    let any_pass = ranking.iter().any(DecompositionReport::passes_gate);
    match args.format {
        Format::Json => emit(
            out,
            &(report::to_json(&Comparison { ranking, skipped }) + "\n"),
        )?,
        Format::Table => emit(out, &report::table(&ranking, &skipped))?,
    }
    Ok(if any_pass { EXIT_OK } else { EXIT_GATE })
}

fn method_name(m: MethodArg) -> &'static str {
    match m {
        MethodArg::Shift => "shift",
        MethodArg::Eigen => "eigen",
        MethodArg::Ldl => "ldl",
        MethodArg::Chtwo => "chtwo",
    }
}

/// Log-spaced grid from `min` to `max`, inclusive.
pub fn delta_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![min];
    }
    let ratio = max / min;
    (0..points)
        .map(|k| min * ratio.powf(k as f64 / (points - 1) as f64))
        .collect()
}

fn sweep_delta(args: &SweepArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    if !(args.min > 0.0 && args.max >= args.min && args.max.is_finite()) {
        return Err(Failure::usage("sweep range needs 0 < --min <= --max"));
    }
    if args.points == 0 {
        return Err(Failure::usage("--points must be at least 1"));
    }
    let a = mm::read_sym(&args.input)?;
    let reference = Reference::new(&a)?;
    // The zero matrix has no scale of its own; sweep absolute values then.
    let scale = if a.max_abs() > 0.0 { a.max_abs() } else { 1.0 };
    let opts = MethodOptions {
        small_pivot_tol: args.small_pivot_tol,
        v_policy: args.v_policy,
        pivot: args.pivot,
        ..MethodOptions::default()
    };

    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    let mut all_pass = true;
    for rel in delta_grid(args.min, args.max, args.points) {
        let delta = (rel * scale).max(psdsplit_core::chtwo::DELTA_FLOOR);
        let opts = MethodOptions {
            delta: Some(delta),
            ..opts.clone()
        };
        let (_, r) = scored(&reference, &a, MethodArg::Chtwo, &opts)?;
        all_pass &= r.passes_gate();
        let row = SweepRow {
            delta,
            recon_err_rel: r.recon_err_rel,
            curvature: r.curvature,
            nnz_l1: r.nnz_l1.unwrap_or(0),
            nnz_l2: r.nnz_l2.unwrap_or(0),
            wall_time_ms: r.wall_time_ms,
        };
        csv.push_str(&row.to_csv());
        csv.push('\n');
    }
    match &args.output {
        Some(path) => fs::write(path, csv).map_err(|e| io_failure(path, e))?,
        None => emit(out, &csv)?,
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_GATE })
}

fn gen(args: &GenArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    if args.n == 0 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    let foreign: Vec<&str> = [
        (args.k.is_some(), Family::Banded, "--k"),
        (args.p.is_some(), Family::Sprand, "--p"),
        (args.cond.is_some(), Family::Illcond, "--cond"),
        (args.definite, Family::Illcond, "--definite"),
    ]
    .into_iter()
    .filter(|&(given, fam, _)| given && fam != args.family)
    .map(|(_, _, name)| name)
    .collect();
    if !foreign.is_empty() {
        return Err(Failure::usage(format!(
            "{} not applicable to this family",
            foreign.join(", ")
        )));
    }

    let mut rng = SplitMix::new(args.seed);
    let a = match args.family {
        Family::Random => random_symmetric(args.n, &mut rng),
        Family::Banded => banded(args.n, args.k.unwrap_or(1), &mut rng),
        Family::Sprand => {
            let p = args.p.unwrap_or(0.1);
            if !(0.0..=1.0).contains(&p) {
                return Err(Failure::usage("--p must lie in [0, 1]"));
            }
            sprand(args.n, p, &mut rng)
        }
        Family::Illcond => {
            let cond = args.cond.unwrap_or(1e6);
            if !(cond >= 1.0 && cond.is_finite()) {
                return Err(Failure::usage("--cond must be finite and at least 1"));
            }
            illcond(args.n, cond, !args.definite, &mut rng)
        }
    };
    match &args.output {
        Some(path) => mm::write_sym(path, &a)?,
        None => {
            let mut buf = Vec::new();
            mm::write_sym_to(&mut buf, &a).expect("writing to memory");
            out.write_all(&buf)
                .map_err(|e| io_failure(Path::new("<stdout>"), e))?;
        }
    }
    Ok(EXIT_OK)
}

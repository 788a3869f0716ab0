//! Files written for a decomposition under a common prefix:
//!
//! | file | contents |
//! |---|---|
//! | `<prefix>.Lplus.mtx`, `<prefix>.Lminus.mtx` | factors, pivoted ordering |
//! | `<prefix>.Dplus.mtx`, `<prefix>.Dminus.mtx` | weights of square-root-free factors |
//! | `<prefix>.Pplus.mtx`, `<prefix>.Pminus.mtx` | explicit parts, original ordering |
//! | `<prefix>.perm.txt` | `perm[k]`, 0-based, one per line |
//! | `<prefix>.report.json` | the scorecard |

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use psdsplit_core::{DecompositionReport, PairForm, Permutation, PsdPair, SymMatrix};

use crate::error::{Error, Result};
use crate::{mm, report};

/// `<prefix><suffix>`, keeping any directories in `prefix`.
pub fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Default prefix for an input: the path without its extension.
pub fn default_prefix(input: &Path) -> PathBuf {
    input.with_extension("")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_perm(path: &Path, perm: &Permutation) -> Result<()> {
    let mut text = String::with_capacity(perm.len() * 4);
    for k in perm.as_slice() {
        text.push_str(&k.to_string());
        text.push('\n');
    }
    fs::write(path, text).map_err(io_err(path))
}

pub fn read_perm(path: &Path) -> Result<Permutation> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut perm = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let k = line.parse().map_err(|_| Error::Parse {
            line: i + 1,
            msg: format!("invalid index `{line}`"),
        })?;
        perm.push(k);
    }
    Ok(Permutation::new(perm)?)
}

/// Writes the factor (or explicit part) files and the permutation sidecar.
/// Returns the paths written.
pub fn write_pair(prefix: &Path, pair: &PsdPair) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let mut path = |suffix: &str| {
        let p = with_suffix(prefix, suffix);
        written.push(p.clone());
        p
    };
    match &pair.form {
        PairForm::Explicit { plus, minus } => {
            mm::write_sym(path(".Pplus.mtx"), plus)?;
            mm::write_sym(path(".Pminus.mtx"), minus)?;
        }
        PairForm::Factored { l1, l2 } => {
            mm::write_lower(path(".Lplus.mtx"), l1)?;
            mm::write_lower(path(".Lminus.mtx"), l2)?;
        }
        PairForm::FactoredLdl { l1, d1, l2, d2 } => {
            mm::write_lower(path(".Lplus.mtx"), l1)?;
            mm::write_diag(path(".Dplus.mtx"), d1)?;
            mm::write_lower(path(".Lminus.mtx"), l2)?;
            mm::write_diag(path(".Dminus.mtx"), d2)?;
        }
    }
    let perm_path = path(".perm.txt");
    write_perm(&perm_path, &pair.perm)?;
    Ok(written)
}

pub fn write_report(path: &Path, r: &DecompositionReport) -> Result<()> {
    let mut f = fs::File::create(path).map_err(io_err(path))?;
    writeln!(f, "{}", report::to_json(r)).map_err(io_err(path))
}

/// Rebuilds `P₊ − P₋` in the original ordering from files written by
/// [`write_pair`].
pub fn read_reconstruction(prefix: &Path) -> Result<SymMatrix> {
    let p = |suffix: &str| with_suffix(prefix, suffix);
    if p(".Pplus.mtx").exists() {
        let plus = mm::read_sym(p(".Pplus.mtx"))?;
        let minus = mm::read_sym(p(".Pminus.mtx"))?;
        return Ok(plus.sub(&minus)?);
    }
    let l1 = mm::read_lower(p(".Lplus.mtx"))?;
    let l2 = mm::read_lower(p(".Lminus.mtx"))?;
    let (g1, g2) = if p(".Dplus.mtx").exists() {
        (
            l1.gram_scaled(&mm::read_diag(p(".Dplus.mtx"))?)?,
            l2.gram_scaled(&mm::read_diag(p(".Dminus.mtx"))?)?,
        )
    } else {
        (l1.gram(), l2.gram())
    };
    let perm = read_perm(&p(".perm.txt"))?;
    Ok(g1.sub(&g2)?.unpermuted(&perm)?)
}

//! Matrix Market exchange format: `coordinate` and `array` layouts, `real`
//! (or `integer`) field, `general` or `symmetric` symmetry.
//!
//! Writers use the coordinate layout with 17 significant digits, which
//! round-trips every finite `f64` exactly. Exact zeros are not written.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use psdsplit_core::{sym_from_row_major, DiagMatrix, LowerTriangular, SymMatrix};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

/// Dense contents of a Matrix Market file, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    fn square(&self) -> Result<usize> {
        if self.rows != self.cols {
            return Err(psdsplit_core::Error::NonSquare {
                rows: self.rows,
                row: 0,
                cols: self.cols,
            }
            .into());
        }
        Ok(self.rows)
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_header(line: &str) -> Result<(Layout, Symmetry)> {
    let words: Vec<String> = line
        .split_whitespace()
        .map(|w| w.to_ascii_lowercase())
        .collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(parse_err(
            1,
            "expected `%%MatrixMarket matrix <layout> <field> <symmetry>`",
        ));
    }
    let layout = match words[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(parse_err(1, format!("unknown layout `{other}`"))),
    };
    match words[3].as_str() {
        "real" | "double" | "integer" => {}
        other => return Err(Error::UnsupportedField(other.to_string())),
    }
    let symmetry = match words[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(Error::UnsupportedSymmetry(other.to_string())),
    };
    Ok((layout, symmetry))
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

/// Parses a Matrix Market stream into a dense matrix. Symmetric files are
/// mirrored; duplicate coordinate entries are summed.
pub fn read_dense_from(reader: impl Read) -> Result<DenseMatrix> {
    let reader = BufReader::new(reader);
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let (layout, symmetry) = parse_header(&header?)?;

    let mut size: Option<(usize, usize, usize)> = None;
    let mut out: Option<DenseMatrix> = None;
    let mut seen = 0usize;
    // Array layout is column-major; symmetric arrays list the lower triangle.
    let mut cursor = (0usize, 0usize);

    for (lineno, line) in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        let Some((rows, cols, expected)) = size else {
            let rows: usize = parse_num(toks.next(), lineno, "row count")?;
            let cols: usize = parse_num(toks.next(), lineno, "column count")?;
            let expected = match layout {
                Layout::Coordinate => parse_num(toks.next(), lineno, "entry count")?,
                Layout::Array if symmetry == Symmetry::Symmetric => {
                    if rows != cols {
                        return Err(parse_err(lineno, "symmetric matrix must be square"));
                    }
                    rows * (rows + 1) / 2
                }
                Layout::Array => rows * cols,
            };
            if rows == 0 || cols == 0 {
                return Err(parse_err(lineno, "matrix has a zero dimension"));
            }
            size = Some((rows, cols, expected));
            out = Some(DenseMatrix {
                rows,
                cols,
                data: vec![0.0; rows * cols],
            });
            continue;
        };
        let m = out.as_mut().expect("allocated with the size line");
        if seen == expected {
            return Err(parse_err(lineno, "more entries than declared"));
        }
        let (i, j, value) = match layout {
            Layout::Coordinate => {
                let i: usize = parse_num(toks.next(), lineno, "row index")?;
                let j: usize = parse_num(toks.next(), lineno, "column index")?;
                let value: f64 = parse_num(toks.next(), lineno, "value")?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(parse_err(lineno, format!("index ({i}, {j}) out of range")));
                }
                (i - 1, j - 1, value)
            }
            Layout::Array => {
                let value: f64 = parse_num(toks.next(), lineno, "value")?;
                let (i, j) = cursor;
                cursor.0 += 1;
                if cursor.0 == rows {
                    cursor.1 += 1;
                    cursor.0 = if symmetry == Symmetry::Symmetric {
                        cursor.1
                    } else {
                        0
                    };
                }
                (i, j, value)
            }
        };
        if toks.next().is_some() {
            return Err(parse_err(lineno, "trailing tokens"));
        }
        if !value.is_finite() {
            return Err(parse_err(lineno, "non-finite value"));
        }
        if symmetry == Symmetry::Symmetric {
            if j > i {
                return Err(parse_err(
                    lineno,
                    "symmetric files store the lower triangle only",
                ));
            }
            if i != j {
                m.data[j * cols + i] += value;
            }
        }
        m.data[i * cols + j] += value;
        seen += 1;
    }

    match (size, out) {
        (Some((_, _, expected)), Some(m)) => {
            if seen < expected {
                return Err(parse_err(
                    0,
                    format!("expected {expected} entries, found {seen}"),
                ));
            }
            Ok(m)
        }
        _ => Err(parse_err(0, "missing size line")),
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_dense(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    read_dense_from(open(path.as_ref())?)
}

/// Reads a symmetric matrix. `general` files are accepted when symmetric to
/// within the usual relative tolerance and are symmetrized by averaging.
pub fn read_sym(path: impl AsRef<Path>) -> Result<SymMatrix> {
    sym_from_dense_matrix(&read_dense(path)?)
}

pub fn sym_from_dense_matrix(m: &DenseMatrix) -> Result<SymMatrix> {
    let n = m.square()?;
    Ok(sym_from_row_major(n, &m.data)?)
}

/// Reads a lower-triangular factor; nonzeros above the diagonal are an error.
pub fn read_lower(path: impl AsRef<Path>) -> Result<LowerTriangular> {
    let m = read_dense(path)?;
    let n = m.square()?;
    for i in 0..n {
        for j in i + 1..n {
            if m.data[i * n + j] != 0.0 {
                return Err(parse_err(
                    0,
                    format!("entry ({}, {}) lies above the diagonal", i + 1, j + 1),
                ));
            }
        }
    }
    Ok(LowerTriangular::from_row_major_lower(n, &m.data)?)
}

/// Reads a diagonal matrix; off-diagonal nonzeros are an error.
pub fn read_diag(path: impl AsRef<Path>) -> Result<DiagMatrix> {
    let m = read_dense(path)?;
    let n = m.square()?;
    let mut d = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && m.data[i * n + j] != 0.0 {
                return Err(parse_err(
                    0,
                    format!("off-diagonal entry ({}, {})", i + 1, j + 1),
                ));
            }
        }
        d.push(m.data[i * n + i]);
    }
    Ok(DiagMatrix::new(d)?)
}

fn write_coordinate(
    mut w: impl Write,
    symmetry: &str,
    n: usize,
    entries: &[(usize, usize, f64)],
) -> std::io::Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real {symmetry}")?;
    writeln!(w, "{n} {n} {}", entries.len())?;
    for &(i, j, x) in entries {
        writeln!(w, "{} {} {:.16e}", i + 1, j + 1, x)?;
    }
    w.flush()
}

fn lower_entries(n: usize, get: impl Fn(usize, usize) -> f64) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for j in 0..n {
        for i in j..n {
            let x = get(i, j);
            if x != 0.0 {
                out.push((i, j, x));
            }
        }
    }
    out
}

pub fn write_sym_to(w: impl Write, a: &SymMatrix) -> std::io::Result<()> {
    write_coordinate(
        w,
        "symmetric",
        a.dim(),
        &lower_entries(a.dim(), |i, j| a.get(i, j)),
    )
}

pub fn write_lower_to(w: impl Write, l: &LowerTriangular) -> std::io::Result<()> {
    write_coordinate(
        w,
        "general",
        l.dim(),
        &lower_entries(l.dim(), |i, j| l.get(i, j)),
    )
}

pub fn write_diag_to(w: impl Write, d: &DiagMatrix) -> std::io::Result<()> {
    let entries: Vec<_> = d
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0.0)
        .map(|(i, &x)| (i, i, x))
        .collect();
    write_coordinate(w, "symmetric", d.dim(), &entries)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn with_path(path: &Path, r: std::io::Result<()>) -> Result<()> {
    r.map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_sym(path: impl AsRef<Path>, a: &SymMatrix) -> Result<()> {
    let path = path.as_ref();
    with_path(path, write_sym_to(create(path)?, a))
}

pub fn write_lower(path: impl AsRef<Path>, l: &LowerTriangular) -> Result<()> {
    let path = path.as_ref();
    with_path(path, write_lower_to(create(path)?, l))
}

pub fn write_diag(path: impl AsRef<Path>, d: &DiagMatrix) -> Result<()> {
    let path = path.as_ref();
    with_path(path, write_diag_to(create(path)?, d))
}

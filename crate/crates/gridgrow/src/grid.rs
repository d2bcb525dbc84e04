//! Grid matrices of cell classes and the text format describing them.
//!
//! A grid matrix is indexed Cartesian-style: cell (k, ℓ) sits in the k-th
//! column from the left and the ℓ-th row from the bottom. Internally both
//! indices are 0-based; the text format lists rows top-to-bottom, matching
//! how the matrices are drawn.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Basis;

/// What one cell of a grid matrix may hold.
#[derive(Clone, Debug, PartialEq)]
pub enum CellSpec {
    /// No entries allowed in this cell.
    Empty,
    /// An avoidance class Av(basis).
    AvClass(Basis),
    /// A class given only by its growth rate (>= 1); usable for spectral
    /// prediction but not for exact counting.
    DirectRate(f64),
}

impl CellSpec {
    /// Wraps a basis as a cell, normalizing Av(1) (= the class {ε}) to an
    /// empty cell.
    pub fn av(basis: Basis) -> CellSpec {
        if basis.forbids_everything() {
            CellSpec::Empty
        } else {
            CellSpec::AvClass(basis)
        }
    }

    /// A direct-rate cell; rates below 1 are rejected since every infinite
    /// class has growth rate at least 1.
    pub fn direct(gr: f64) -> Result<CellSpec> {
        if !gr.is_finite() || gr < 1.0 {
            return Err(Error::Domain(format!(
                "direct growth rate must be a finite real >= 1, got {gr}"
            )));
        }
        Ok(CellSpec::DirectRate(gr))
    }

    pub fn is_empty_cell(&self) -> bool {
        matches!(self, CellSpec::Empty)
    }
}

impl fmt::Display for CellSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellSpec::Empty => write!(f, "."),
            CellSpec::AvClass(basis) => write!(f, "{basis}"),
            CellSpec::DirectRate(gr) => write!(f, "gr={gr}"),
        }
    }
}

/// A t×u matrix of cell classes.
#[derive(Clone, Debug, PartialEq)]
pub struct GridMatrix {
    cols: usize,
    rows: usize,
    /// Stored column-major with the bottom row first: index k * rows + ℓ.
    cells: Vec<CellSpec>,
}

impl GridMatrix {
    /// Builds a grid from cells listed in storage order (column k outer,
    /// row ℓ inner, bottom row first). At least one cell must be nonempty.
    pub fn new(cols: usize, rows: usize, cells: Vec<CellSpec>) -> Result<Self> {
        if cols == 0 || rows == 0 {
            return Err(Error::Dimension(
                "grid must have at least one column and one row".into(),
            ));
        }
        if cells.len() != cols * rows {
            return Err(Error::Dimension(format!(
                "expected {} cells for a {cols}x{rows} grid, got {}",
                cols * rows,
                cells.len()
            )));
        }
        let grid = Self { cols, rows, cells };
        if grid.support().is_empty() {
            return Err(Error::Domain("grid has no nonempty cells".into()));
        }
        Ok(grid)
    }

    /// Builds a grid from display-ordered rows (top row first), as in the
    /// text format.
    pub fn from_rows_top_down(display_rows: Vec<Vec<CellSpec>>) -> Result<Self> {
        let rows = display_rows.len();
        let cols = display_rows.first().map_or(0, Vec::len);
        if display_rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("rows have unequal cell counts".into()));
        }
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(
                "grid must have at least one column and one row".into(),
            ));
        }
        let mut cells = Vec::with_capacity(cols * rows);
        for k in 0..cols {
            // display row 0 is the top row, i.e. ℓ = rows - 1
            for display_row in display_rows.iter().rev() {
                cells.push(display_row[k].clone());
            }
        }
        Self::new(cols, rows, cells)
    }

    /// Number of columns t.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of rows u.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Cell (k, ℓ), 0-based: k-th column from the left, ℓ-th row from the
    /// bottom.
    pub fn cell(&self, k: usize, l: usize) -> &CellSpec {
        &self.cells[k * self.rows + l]
    }

    /// Indices of nonempty cells, in storage order.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for k in 0..self.cols {
            for l in 0..self.rows {
                if !self.cell(k, l).is_empty_cell() {
                    out.push((k, l));
                }
            }
        }
        out
    }

    /// Parses the grid-spec text format; see [`parse_grid`].
    pub fn parse(text: &str) -> Result<Self> {
        parse_grid(text)
    }
}

impl fmt::Display for GridMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in (0..self.rows).rev() {
            let row = (0..self.cols)
                .map(|k| self.cell(k, l).to_string())
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Parses a grid-spec document.
///
/// One line per grid row, top row first; `#` starts a comment. Tokens are
/// whitespace-separated:
///
/// * `.` for an empty cell
/// * `Av(p1,p2,...)` for an avoidance class, patterns in digit notation
/// * `inc`, shorthand for `Av(21)` (increasing cell)
/// * `dec`, shorthand for `Av(12)` (decreasing cell)
/// * `gr=<real>` for a class given only by its growth rate (>= 1)
pub fn parse_grid(text: &str) -> Result<GridMatrix> {
    let mut display_rows: Vec<Vec<CellSpec>> = Vec::new();
    let mut width: Option<usize> = None;
    for (line_idx, raw_line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let line = raw_line.split('#').next().unwrap_or("");
        let mut row = Vec::new();
        for (column, token) in tokenize(line) {
            row.push(parse_cell(token, line_no, column)?);
        }
        if row.is_empty() {
            continue;
        }
        if let Some(w) = width {
            if row.len() != w {
                return Err(Error::Dimension(format!(
                    "line {line_no} has {} cells, previous rows have {w}",
                    row.len()
                )));
            }
        } else {
            width = Some(row.len());
        }
        display_rows.push(row);
    }
    if display_rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "document contains no grid rows".into(),
        });
    }
    GridMatrix::from_rows_top_down(display_rows)
}

/// Yields (1-based starting column, token) for each whitespace-separated
/// token of `line`.
fn tokenize(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0usize;
    std::iter::from_fn(move || {
        let trimmed = rest.trim_start();
        let skipped = rest.len() - trimmed.len();
        offset += skipped;
        if trimmed.is_empty() {
            return None;
        }
        let end = trimmed
            .find(char::is_whitespace)
            .unwrap_or(trimmed.len());
        let token = &trimmed[..end];
        let start = offset;
        offset += end;
        rest = &trimmed[end..];
        Some((start + 1, token))
    })
}

fn parse_cell(token: &str, line: usize, column: usize) -> Result<CellSpec> {
    let err = |message: String| Error::Parse {
        line,
        column,
        message,
    };
    match token {
        "." => Ok(CellSpec::Empty),
        "inc" => Ok(CellSpec::av(Basis::parse("Av(21)").expect("builtin basis"))),
        "dec" => Ok(CellSpec::av(Basis::parse("Av(12)").expect("builtin basis"))),
        _ if token.starts_with("gr=") => {
            let value: f64 = token[3..]
                .parse()
                .map_err(|_| err(format!("cannot parse growth rate in {token:?}")))?;
            CellSpec::direct(value)
        }
        _ if token.starts_with("Av(") => {
            let basis = Basis::parse(token).map_err(|e| err(e.to_string()))?;
            Ok(CellSpec::av(basis))
        }
        _ => Err(err(format!(
            "unknown cell token {token:?} (expected ., inc, dec, Av(...), or gr=...)"
        ))),
    }
}

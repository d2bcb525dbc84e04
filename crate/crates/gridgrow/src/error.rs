use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A grid-spec or catalog document failed to lex or parse.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Rows of a grid-spec document disagree on the number of cells.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A value lies outside the domain an operation is defined on
    /// (growth rate below 1, all-empty grid, zero singular value, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A sequence passed to an order-isomorphism check has repeated values.
    #[error("sequence contains repeated (or unordered) values")]
    RepeatedValues,

    /// A weight matrix puts positive weight on an empty cell.
    #[error("inadmissible weight matrix: positive entry at empty cell ({col}, {row})")]
    Inadmissible { col: usize, row: usize },

    /// Exact counting or sampling touched a cell described only by a direct
    /// growth rate; those cells have no avoidance basis to enumerate.
    #[error("cell ({col}, {row}) carries only a direct growth rate and cannot be counted exactly")]
    Uncountable { col: usize, row: usize },

    /// No growth rate is known for the listed cells (1-based (col, row)).
    #[error("no growth rate known for cell(s) {}; add them to a catalog file or use gr=", fmt_cells(.0))]
    UnknownGrowthRate(Vec<(usize, usize)>),

    /// The listed cells hold finite classes, which have no positive growth
    /// rate; the spectral model requires empty or infinite cells.
    #[error("cell(s) {} contain finite classes; replace them with `.` or an infinite class", fmt_cells(.0))]
    FiniteClass(Vec<(usize, usize)>),

    /// A brute-force length cap or enumeration memory budget was exceeded.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    /// Power iteration ran out of its iteration budget.
    #[error("power iteration did not converge after {iters} iterations (last residual {residual:e})")]
    NonConvergence { iters: u64, residual: f64 },

    /// The gradient of log f is undefined where an entry is zero.
    #[error("gradient of log f is undefined at zero entry ({col}, {row})")]
    ZeroEntryGradient { col: usize, row: usize },

    /// A finite-difference step would push an entry out of (0, 1).
    #[error("finite-difference step {step} too large for entry at ({col}, {row})")]
    StepTooLarge { col: usize, row: usize, step: f64 },

    /// Catch-all for malformed arguments to library calls.
    #[error("{0}")]
    InvalidInput(String),

    /// Missing or inconsistent command-line arguments.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn fmt_cells(cells: &[(usize, usize)]) -> String {
    cells
        .iter()
        .map(|(k, l)| format!("({k}, {l})"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;

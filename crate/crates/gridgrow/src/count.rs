//! Exact counting of gridded permutations by cell occupancy.
//!
//! A weight matrix A records how many entries land in each cell. The number
//! of gridded permutations with occupancy A factors into one multinomial per
//! column (interleaving the column's cells horizontally), one per row
//! (interleaving vertically), and the per-cell class count at each
//! occupancy. Summing over all admissible weight matrices of weight n gives
//! the total number of gridded permutations of length n.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{CellSpec, GridMatrix};
use crate::perm::{AvEnumerator, Basis, CountSequence, DEFAULT_LIST_BUDGET};

/// A t×u matrix of nonnegative integer cell occupancies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    cols: usize,
    rows: usize,
    /// Stored column-major with the bottom row first: index k * rows + ℓ.
    entries: Vec<u64>,
    weight: u64,
}

impl WeightMatrix {
    /// Builds a weight matrix from entries in storage order (column k outer,
    /// row ℓ inner, bottom row first).
    pub fn new(cols: usize, rows: usize, entries: Vec<u64>) -> Result<Self> {
        if cols == 0 || rows == 0 || entries.len() != cols * rows {
            return Err(Error::Dimension(format!(
                "expected {cols}x{rows} = {} entries, got {}",
                cols * rows,
                entries.len()
            )));
        }
        let weight = entries.iter().sum();
        Ok(Self {
            cols,
            rows,
            entries,
            weight,
        })
    }

    pub fn zero(cols: usize, rows: usize) -> Self {
        Self {
            cols,
            rows,
            entries: vec![0; cols * rows],
            weight: 0,
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn entry(&self, k: usize, l: usize) -> u64 {
        self.entries[k * self.rows + l]
    }

    /// Sum of all entries.
    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn col_sum(&self, k: usize) -> u64 {
        (0..self.rows).map(|l| self.entry(k, l)).sum()
    }

    pub fn row_sum(&self, l: usize) -> u64 {
        (0..self.cols).map(|k| self.entry(k, l)).sum()
    }

    /// Entries flattened in storage order (column-major, bottom row first);
    /// comparing two flattenings lexicographically is the argmax tie-break.
    pub fn flattened(&self) -> &[u64] {
        &self.entries
    }

    /// Checks supp(A) ⊆ supp(grid): positive entries only on nonempty cells.
    pub fn admissible_for(&self, grid: &GridMatrix) -> Result<()> {
        if self.cols != grid.cols() || self.rows != grid.rows() {
            return Err(Error::Dimension(format!(
                "weight matrix is {}x{} but grid is {}x{}",
                self.cols,
                self.rows,
                grid.cols(),
                grid.rows()
            )));
        }
        for k in 0..self.cols {
            for l in 0..self.rows {
                if self.entry(k, l) > 0 && grid.cell(k, l).is_empty_cell() {
                    return Err(Error::Inadmissible {
                        col: k + 1,
                        row: l + 1,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Streams every admissible nonnegative integral matrix of weight exactly
/// `n`, each once. There are C(n+m-1, m-1) of them, m = #nonempty cells.
pub fn admissible_weight_matrices(
    grid: &GridMatrix,
    n: u64,
) -> impl Iterator<Item = WeightMatrix> + Send + '_ {
    let support = grid.support();
    let (cols, rows) = (grid.cols(), grid.rows());
    let mut parts = vec![0u64; support.len()];
    if let Some(first) = parts.first_mut() {
        *first = n;
    }
    let mut pending = Some(parts);
    std::iter::from_fn(move || {
        let current = pending.take()?;
        let mut entries = vec![0u64; cols * rows];
        for (&(k, l), &v) in support.iter().zip(current.iter()) {
            entries[k * rows + l] = v;
        }
        let out = WeightMatrix {
            cols,
            rows,
            entries,
            weight: n,
        };
        let mut next = current;
        if advance_composition(&mut next) {
            pending = Some(next);
        }
        Some(out)
    })
}

/// Steps `parts` to the next weak composition of the same total; returns
/// false when `parts` was the last one (all weight in the final slot).
fn advance_composition(parts: &mut [u64]) -> bool {
    let m = parts.len();
    for i in 0..m.saturating_sub(1) {
        if parts[i] > 0 {
            let carried = parts[i] - 1;
            parts[i] = 0;
            parts[i + 1] += 1;
            parts[0] = carried;
            return true;
        }
    }
    false
}

/// Exact factorials 0..=n, shared read-only across count evaluations.
pub(crate) struct Factorials {
    table: Vec<BigUint>,
}

impl Factorials {
    pub fn up_to(n: u64) -> Self {
        let mut table = Vec::with_capacity(n as usize + 1);
        table.push(BigUint::one());
        for i in 1..=n {
            let next = table.last().unwrap() * i;
            table.push(next);
        }
        Self { table }
    }

    pub fn factorial(&self, k: u64) -> &BigUint {
        &self.table[k as usize]
    }

    /// Multinomial coefficient of the parts' total over the parts; the
    /// empty multinomial (total 0) is 1.
    pub fn multinomial(&self, parts: impl Iterator<Item = u64> + Clone) -> BigUint {
        let total: u64 = parts.clone().sum();
        let mut result = self.factorial(total).clone();
        for p in parts {
            if p > 1 {
                result /= self.factorial(p);
            }
        }
        result
    }
}

/// Per-cell class counts for one grid, computed once and shared.
///
/// Cells with the same basis share a single enumeration.
pub struct CellCountTable {
    cols: usize,
    rows: usize,
    /// `None` for empty and direct-rate cells.
    counts: Vec<Option<CountSequence>>,
}

impl CellCountTable {
    /// Counts every avoidance-class cell up to length `max_entry`.
    pub fn build(grid: &GridMatrix, max_entry: u64) -> Result<Self> {
        Self::build_with_budget(grid, max_entry, DEFAULT_LIST_BUDGET)
    }

    pub fn build_with_budget(
        grid: &GridMatrix,
        max_entry: u64,
        budget: usize,
    ) -> Result<Self> {
        let mut by_basis: HashMap<Basis, CountSequence> = HashMap::new();
        let mut counts = Vec::with_capacity(grid.cols() * grid.rows());
        for k in 0..grid.cols() {
            for l in 0..grid.rows() {
                match grid.cell(k, l) {
                    CellSpec::AvClass(basis) => {
                        if !by_basis.contains_key(basis) {
                            let seq = AvEnumerator::with_budget(basis.clone(), budget)
                                .counts(max_entry as usize)?;
                            by_basis.insert(basis.clone(), seq);
                        }
                        counts.push(Some(by_basis[basis].clone()));
                    }
                    CellSpec::Empty | CellSpec::DirectRate(_) => counts.push(None),
                }
            }
        }
        Ok(Self {
            cols: grid.cols(),
            rows: grid.rows(),
            counts,
        })
    }

    fn cell(&self, k: usize, l: usize) -> Option<&CountSequence> {
        self.counts[k * self.rows + l].as_ref()
    }
}

/// Number of gridded permutations with cell occupancy exactly `a`.
pub fn count_gridded_fixed(
    grid: &GridMatrix,
    a: &WeightMatrix,
    cell_counts: &CellCountTable,
) -> Result<BigUint> {
    let facts = Factorials::up_to(max_line_sum(a));
    count_fixed_with(grid, a, cell_counts, &facts)
}

fn max_line_sum(a: &WeightMatrix) -> u64 {
    let cols = (0..a.cols()).map(|k| a.col_sum(k)).max().unwrap_or(0);
    let rows = (0..a.rows()).map(|l| a.row_sum(l)).max().unwrap_or(0);
    cols.max(rows)
}

fn count_fixed_with(
    grid: &GridMatrix,
    a: &WeightMatrix,
    cell_counts: &CellCountTable,
    facts: &Factorials,
) -> Result<BigUint> {
    a.admissible_for(grid)?;
    if cell_counts.cols != grid.cols() || cell_counts.rows != grid.rows() {
        return Err(Error::Dimension("count table does not match grid".into()));
    }
    let mut total = BigUint::one();
    for k in 0..grid.cols() {
        total *= facts.multinomial((0..grid.rows()).map(|l| a.entry(k, l)));
    }
    for l in 0..grid.rows() {
        total *= facts.multinomial((0..grid.cols()).map(|k| a.entry(k, l)));
    }
    for k in 0..grid.cols() {
        for l in 0..grid.rows() {
            let occ = a.entry(k, l);
            if occ == 0 {
                continue;
            }
            match grid.cell(k, l) {
                CellSpec::DirectRate(_) => {
                    return Err(Error::Uncountable {
                        col: k + 1,
                        row: l + 1,
                    })
                }
                _ => {
                    let seq = cell_counts.cell(k, l).ok_or(Error::Uncountable {
                        col: k + 1,
                        row: l + 1,
                    })?;
                    let c = seq.get(occ as usize).ok_or_else(|| {
                        Error::InvalidInput(format!(
                            "cell counts only reach length {}, need {occ}",
                            seq.max_len()
                        ))
                    })?;
                    if c.is_zero() {
                        return Ok(BigUint::zero());
                    }
                    total *= c;
                }
            }
        }
    }
    Ok(total)
}

/// Counts gridded permutations of a grid, reusing one cell-count table and
/// factorial table across lengths.
pub struct GridCounter<'g> {
    grid: &'g GridMatrix,
    table: CellCountTable,
    facts: Factorials,
    max_n: u64,
}

impl<'g> GridCounter<'g> {
    /// Prepares counting for lengths up to `max_n`. Every nonempty cell
    /// must be an avoidance class.
    pub fn new(grid: &'g GridMatrix, max_n: u64) -> Result<Self> {
        Self::with_budget(grid, max_n, DEFAULT_LIST_BUDGET)
    }

    pub fn with_budget(grid: &'g GridMatrix, max_n: u64, budget: usize) -> Result<Self> {
        for (k, l) in grid.support() {
            if let CellSpec::DirectRate(_) = grid.cell(k, l) {
                return Err(Error::Uncountable {
                    col: k + 1,
                    row: l + 1,
                });
            }
        }
        let table = CellCountTable::build_with_budget(grid, max_n, budget)?;
        Ok(Self {
            grid,
            table,
            facts: Factorials::up_to(max_n),
            max_n,
        })
    }

    pub fn grid(&self) -> &GridMatrix {
        self.grid
    }

    pub fn cell_counts(&self) -> &CellCountTable {
        &self.table
    }

    /// |Grid♯_A| for one occupancy matrix.
    pub fn count_fixed(&self, a: &WeightMatrix) -> Result<BigUint> {
        if a.weight() > self.max_n {
            return Err(Error::InvalidInput(format!(
                "counter prepared up to weight {}, asked for {}",
                self.max_n,
                a.weight()
            )));
        }
        count_fixed_with(self.grid, a, &self.table, &self.facts)
    }

    /// |Grid♯_n|: the sum of `count_fixed` over all admissible weight
    /// matrices of weight n. Summands are independent and evaluated in
    /// parallel.
    pub fn total(&self, n: u64) -> Result<BigUint> {
        if n > self.max_n {
            return Err(Error::InvalidInput(format!(
                "counter prepared up to weight {}, asked for {n}",
                self.max_n
            )));
        }
        admissible_weight_matrices(self.grid, n)
            .par_bridge()
            .map(|a| self.count_fixed(&a))
            .try_reduce(BigUint::zero, |x, y| Ok(x + y))
    }

    /// The weight-n occupancy matrix with the largest count, and that
    /// count. Ties go to the lexicographically smallest flattening
    /// (column-major, bottom row first).
    pub fn argmax(&self, n: u64) -> Result<(WeightMatrix, BigUint)> {
        let mut best: Option<(WeightMatrix, BigUint)> = None;
        for a in admissible_weight_matrices(self.grid, n) {
            let c = self.count_fixed(&a)?;
            let better = match &best {
                None => true,
                Some((bm, bc)) => c > *bc || (c == *bc && a.flattened() < bm.flattened()),
            };
            if better {
                best = Some((a, c));
            }
        }
        best.ok_or_else(|| Error::Domain("no admissible weight matrices".into()))
    }
}

/// One-shot |Grid♯_n|; building a [`GridCounter`] is cheaper when counting
/// several lengths.
pub fn count_gridded_total(grid: &GridMatrix, n: u64) -> Result<BigUint> {
    GridCounter::new(grid, n)?.total(n)
}

/// One-shot argmax over weight-n occupancy matrices.
pub fn argmax_weight_matrix(grid: &GridMatrix, n: u64) -> Result<(WeightMatrix, BigUint)> {
    GridCounter::new(grid, n)?.argmax(n)
}

/// Exact binomial coefficient, used by bound checks.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut result = BigUint::one();
    for i in 0..k {
        result = result * (n - i) / (i + 1);
    }
    result
}

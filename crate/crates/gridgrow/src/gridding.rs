//! Gridded permutations: brute-force membership, ungridded counting, and
//! uniform sampling at fixed cell occupancy.

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::count::WeightMatrix;
use crate::error::{Error, Result};
use crate::grid::{CellSpec, GridMatrix};
use crate::perm::{avoids_all_values, AvEnumerator, Basis, Permutation};

/// Length caps for the factorial-time searches.
#[derive(Clone, Copy, Debug)]
pub struct BruteForceCaps {
    /// Longest permutation `brute_force_membership` will accept.
    pub membership: usize,
    /// Largest n for which `count_ungridded` will enumerate all n!
    /// permutations.
    pub ungridded: usize,
}

impl Default for BruteForceCaps {
    fn default() -> Self {
        Self {
            membership: 10,
            ungridded: 7,
        }
    }
}

/// A permutation together with one witnessing division into cells.
///
/// Divisions are 1-based: column divisions 1 = c_1 <= ... <= c_{t+1} = n+1
/// split index ranges, row divisions split value ranges bottom-up. Cell
/// (k, ℓ) holds the entries with index in [c_k, c_{k+1}) and value in
/// [r_ℓ, r_{ℓ+1}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GriddedPermutation {
    perm: Permutation,
    col_divisions: Vec<usize>,
    row_divisions: Vec<usize>,
}

impl GriddedPermutation {
    pub fn new(
        perm: Permutation,
        col_divisions: Vec<usize>,
        row_divisions: Vec<usize>,
    ) -> Result<Self> {
        let n = perm.len();
        for divs in [&col_divisions, &row_divisions] {
            let ok = divs.len() >= 2
                && divs[0] == 1
                && *divs.last().unwrap() == n + 1
                && divs.windows(2).all(|w| w[0] <= w[1]);
            if !ok {
                return Err(Error::InvalidInput(format!(
                    "division sequence {divs:?} must rise from 1 to {}",
                    n + 1
                )));
            }
        }
        Ok(Self {
            perm,
            col_divisions,
            row_divisions,
        })
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn col_divisions(&self) -> &[usize] {
        &self.col_divisions
    }

    pub fn row_divisions(&self) -> &[usize] {
        &self.row_divisions
    }

    pub fn cols(&self) -> usize {
        self.col_divisions.len() - 1
    }

    pub fn rows(&self) -> usize {
        self.row_divisions.len() - 1
    }

    /// The values in cell (k, ℓ), in index order.
    pub fn cell_content(&self, k: usize, l: usize) -> Vec<u32> {
        let (c_lo, c_hi) = (self.col_divisions[k], self.col_divisions[k + 1]);
        let (r_lo, r_hi) = (self.row_divisions[l] as u32, self.row_divisions[l + 1] as u32);
        self.perm.entries()[c_lo - 1..c_hi - 1]
            .iter()
            .copied()
            .filter(|&v| r_lo <= v && v < r_hi)
            .collect()
    }

    /// How many entries each cell holds.
    pub fn occupancy(&self) -> WeightMatrix {
        let (t, u) = (self.cols(), self.rows());
        let mut entries = vec![0u64; t * u];
        for k in 0..t {
            for l in 0..u {
                entries[k * u + l] = self.cell_content(k, l).len() as u64;
            }
        }
        WeightMatrix::new(t, u, entries).expect("occupancy dimensions")
    }

    /// Re-checks the defining invariant: each cell's content must be order
    /// isomorphic to a member of that cell's class.
    pub fn validate(&self, grid: &GridMatrix) -> Result<()> {
        if self.cols() != grid.cols() || self.rows() != grid.rows() {
            return Err(Error::Dimension(format!(
                "gridding is {}x{} but grid is {}x{}",
                self.cols(),
                self.rows(),
                grid.cols(),
                grid.rows()
            )));
        }
        for k in 0..grid.cols() {
            for l in 0..grid.rows() {
                let content = self.cell_content(k, l);
                if !cell_accepts(grid.cell(k, l), &content) {
                    return Err(Error::InvalidInput(format!(
                        "cell ({}, {}) content {content:?} is not in {}",
                        k + 1,
                        l + 1,
                        grid.cell(k, l)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Membership of a raw value sequence in a cell class. Empty content is in
/// every class; nonempty content in a direct-rate cell is undecidable.
fn cell_accepts(cell: &CellSpec, content: &[u32]) -> bool {
    match cell {
        CellSpec::Empty => content.is_empty(),
        CellSpec::AvClass(basis) => avoids_all_values(basis, content),
        CellSpec::DirectRate(_) => content.is_empty(),
    }
}

fn require_countable(grid: &GridMatrix) -> Result<()> {
    for (k, l) in grid.support() {
        if let CellSpec::DirectRate(_) = grid.cell(k, l) {
            return Err(Error::Uncountable {
                col: k + 1,
                row: l + 1,
            });
        }
    }
    Ok(())
}

/// All division sequences 1 = d_1 <= ... <= d_{parts+1} = n+1.
fn division_sequences(n: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![1usize; parts + 1];
    current[parts] = n + 1;
    fn rec(i: usize, parts: usize, n: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == parts {
            out.push(current.clone());
            return;
        }
        for d in current[i - 1]..=n + 1 {
            current[i] = d;
            rec(i + 1, parts, n, current, out);
        }
    }
    if parts == 0 {
        // degenerate; unused but keep total ordering coherent
        return vec![vec![1]];
    }
    rec(1, parts, n, &mut current, &mut out);
    out
}

/// Searches every pair of division sequences for one witnessing that `perm`
/// lies in the grid class; returns the first witness found.
///
/// All nonempty cells must be avoidance classes, and `perm` must not exceed
/// the membership cap.
pub fn brute_force_membership(
    grid: &GridMatrix,
    perm: &Permutation,
) -> Result<Option<GriddedPermutation>> {
    brute_force_membership_with_caps(grid, perm, BruteForceCaps::default())
}

pub fn brute_force_membership_with_caps(
    grid: &GridMatrix,
    perm: &Permutation,
    caps: BruteForceCaps,
) -> Result<Option<GriddedPermutation>> {
    require_countable(grid)?;
    let n = perm.len();
    if n > caps.membership {
        return Err(Error::ResourceCap(format!(
            "membership search capped at length {}, got {n}",
            caps.membership
        )));
    }
    let col_seqs = division_sequences(n, grid.cols());
    let row_seqs = division_sequences(n, grid.rows());
    for cs in &col_seqs {
        for rs in &row_seqs {
            let gridded = GriddedPermutation {
                perm: perm.clone(),
                col_divisions: cs.clone(),
                row_divisions: rs.clone(),
            };
            if gridded.validate(grid).is_ok() {
                return Ok(Some(gridded));
            }
        }
    }
    Ok(None)
}

/// |Grid_n|: the number of length-n permutations admitting some gridding,
/// by checking all n! of them.
pub fn count_ungridded(grid: &GridMatrix, n: usize) -> Result<BigUint> {
    count_ungridded_with_caps(grid, n, BruteForceCaps::default())
}

pub fn count_ungridded_with_caps(
    grid: &GridMatrix,
    n: usize,
    caps: BruteForceCaps,
) -> Result<BigUint> {
    require_countable(grid)?;
    if n > caps.ungridded {
        return Err(Error::ResourceCap(format!(
            "ungridded counting capped at length {}, got {n}",
            caps.ungridded
        )));
    }
    let membership_caps = BruteForceCaps {
        membership: n,
        ..caps
    };
    let mut count = BigUint::zero();
    for entries in (1..=n as u32).permutations(n) {
        let perm = Permutation::new(entries).expect("generated permutation");
        if brute_force_membership_with_caps(grid, &perm, membership_caps)?.is_some() {
            count += 1u32;
        }
    }
    Ok(count)
}

/// Draws a uniformly random gridded permutation with occupancy `a`.
///
/// One multiset interleaving is drawn per column (which cells the column's
/// index slots belong to) and per row (which cells the value slots belong
/// to), plus one uniformly random class member per cell; assembling these
/// choices is a bijection onto the gridded permutations with occupancy `a`,
/// so the draw is uniform. Deterministic for a fixed seed.
pub fn sample_gridded(grid: &GridMatrix, a: &WeightMatrix, seed: u64) -> Result<GriddedPermutation> {
    a.admissible_for(grid)?;
    let (t, u) = (grid.cols(), grid.rows());
    for k in 0..t {
        for l in 0..u {
            if a.entry(k, l) > 0 {
                if let CellSpec::DirectRate(_) = grid.cell(k, l) {
                    return Err(Error::Uncountable {
                        col: k + 1,
                        row: l + 1,
                    });
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Column k's slots, in index order, each labelled with the row of the
    // cell occupying that slot; a shuffle of the multiset is a uniformly
    // random interleaving.
    let mut col_assign: Vec<Vec<usize>> = Vec::with_capacity(t);
    for k in 0..t {
        let mut labels = Vec::with_capacity(a.col_sum(k) as usize);
        for l in 0..u {
            labels.extend(std::iter::repeat_n(l, a.entry(k, l) as usize));
        }
        shuffle(&mut labels, &mut rng);
        col_assign.push(labels);
    }
    let mut row_assign: Vec<Vec<usize>> = Vec::with_capacity(u);
    for l in 0..u {
        let mut labels = Vec::with_capacity(a.row_sum(l) as usize);
        for k in 0..t {
            labels.extend(std::iter::repeat_n(k, a.entry(k, l) as usize));
        }
        shuffle(&mut labels, &mut rng);
        row_assign.push(labels);
    }

    // One uniformly random member of each occupied cell's class.
    let mut patterns: Vec<Option<Permutation>> = vec![None; t * u];
    for k in 0..t {
        for l in 0..u {
            let occ = a.entry(k, l) as usize;
            if occ == 0 {
                continue;
            }
            let CellSpec::AvClass(basis) = grid.cell(k, l) else {
                unreachable!("positive weight on non-class cell rejected above");
            };
            let list = class_list(basis, occ)?;
            let pick = if list.len() > 1 {
                rng.gen_range(0..list.len())
            } else {
                0
            };
            patterns[k * u + l] = Some(list[pick].clone());
        }
    }

    // Global index range of column k and value range of row ℓ.
    let n = a.weight() as usize;
    let mut col_divisions = vec![1usize; t + 1];
    for k in 0..t {
        col_divisions[k + 1] = col_divisions[k] + a.col_sum(k) as usize;
    }
    let mut row_divisions = vec![1usize; u + 1];
    for l in 0..u {
        row_divisions[l + 1] = row_divisions[l] + a.row_sum(l) as usize;
    }

    let mut entries = vec![0u32; n];
    for k in 0..t {
        for l in 0..u {
            let Some(pattern) = &patterns[k * u + l] else {
                continue;
            };
            let indices: Vec<usize> = col_assign[k]
                .iter()
                .enumerate()
                .filter(|&(_, &lbl)| lbl == l)
                .map(|(slot, _)| col_divisions[k] - 1 + slot)
                .collect();
            let values: Vec<u32> = row_assign[l]
                .iter()
                .enumerate()
                .filter(|&(_, &lbl)| lbl == k)
                .map(|(slot, _)| (row_divisions[l] + slot) as u32)
                .collect();
            for (j, &idx) in indices.iter().enumerate() {
                entries[idx] = values[pattern.entries()[j] as usize - 1];
            }
        }
    }

    let perm = Permutation::new(entries)
        .expect("assembled entries form a permutation");
    GriddedPermutation::new(perm, col_divisions, row_divisions)
}

fn shuffle<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

fn class_list(basis: &Basis, len: usize) -> Result<Vec<Permutation>> {
    let mut en = AvEnumerator::new(basis.clone());
    Ok(en.list(len)?.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::parse_grid;
    use std::collections::HashSet;

    fn skew() -> GridMatrix {
        parse_grid("Av(12) Av(21)\nAv(21) Av(12)").unwrap()
    }

    fn juxt() -> GridMatrix {
        parse_grid("Av(21) Av(21)").unwrap()
    }

    fn perm(digits: &str) -> Permutation {
        Permutation::from_digits(digits).unwrap()
    }

    #[test]
    fn empty_permutation_has_trivial_witness() {
        let w = brute_force_membership(&skew(), &Permutation::empty())
            .unwrap()
            .expect("empty permutation is in every grid class");
        assert_eq!(w.col_divisions(), &[1, 1, 1]);
        assert_eq!(w.row_divisions(), &[1, 1, 1]);
        w.validate(&skew()).unwrap();
    }

    #[test]
    fn single_cell_membership() {
        let g = parse_grid("Av(21)").unwrap();
        assert!(brute_force_membership(&g, &perm("21")).unwrap().is_none());
        assert!(brute_force_membership(&g, &perm("12")).unwrap().is_some());
    }

    #[test]
    fn figure_permutation_is_skew_merged() {
        let entries = vec![14, 1, 5, 7, 12, 10, 11, 9, 13, 15, 8, 6, 4, 16, 3, 2];
        let p = Permutation::new(entries).unwrap();
        let caps = BruteForceCaps {
            membership: 16,
            ungridded: 7,
        };
        let w = brute_force_membership_with_caps(&skew(), &p, caps)
            .unwrap()
            .expect("figure permutation admits a gridding");
        w.validate(&skew()).unwrap();
    }

    #[test]
    fn membership_cap_is_enforced() {
        let p = Permutation::identity(11);
        assert!(matches!(
            brute_force_membership(&skew(), &p),
            Err(Error::ResourceCap(_))
        ));
    }

    #[test]
    fn ungridded_counts_match_oracle_values() {
        // brute force over all n! permutations, frozen independently
        let skew_expect = [1u64, 1, 2, 6, 22, 86];
        for (n, e) in skew_expect.iter().enumerate() {
            assert_eq!(count_ungridded(&skew(), n).unwrap(), BigUint::from(*e));
        }
        let juxt_expect = [1u64, 1, 2, 5, 12, 27];
        for (n, e) in juxt_expect.iter().enumerate() {
            assert_eq!(count_ungridded(&juxt(), n).unwrap(), BigUint::from(*e));
        }
    }

    #[test]
    fn sampling_monotone_cell_gives_identity() {
        let g = parse_grid("Av(21)").unwrap();
        let a = WeightMatrix::new(1, 1, vec![6]).unwrap();
        for seed in [0u64, 1, 17, 123456] {
            let w = sample_gridded(&g, &a, seed).unwrap();
            assert_eq!(w.perm(), &Permutation::identity(6));
        }
    }

    #[test]
    fn sampling_weight_zero_gives_empty() {
        let a = WeightMatrix::zero(2, 2);
        let w = sample_gridded(&skew(), &a, 9).unwrap();
        assert!(w.perm().is_empty());
        assert_eq!(w.col_divisions(), &[1, 1, 1]);
    }

    #[test]
    fn samples_are_valid_and_deterministic() {
        let a = WeightMatrix::new(2, 2, vec![2, 1, 1, 3]).unwrap();
        let first = sample_gridded(&skew(), &a, 42).unwrap();
        for _ in 0..3 {
            assert_eq!(sample_gridded(&skew(), &a, 42).unwrap(), first);
        }
        for seed in 0..50 {
            let w = sample_gridded(&skew(), &a, seed).unwrap();
            w.validate(&skew()).unwrap();
            assert_eq!(&w.occupancy(), &a);
        }
    }

    #[test]
    fn sampling_hits_all_weight_one_outcomes() {
        // weight 1 on each cell in turn: the single entry must land there
        let g = skew();
        let mut seen = HashSet::new();
        for (k, l) in g.support() {
            let mut entries = vec![0u64; 4];
            entries[k * 2 + l] = 1;
            let a = WeightMatrix::new(2, 2, entries).unwrap();
            let w = sample_gridded(&g, &a, 7).unwrap();
            seen.insert((w.col_divisions().to_vec(), w.row_divisions().to_vec()));
        }
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn direct_rate_cells_are_rejected() {
        let g = parse_grid("gr=4 .\nAv(12) Av(12)").unwrap();
        let a = WeightMatrix::new(2, 2, vec![1, 1, 1, 0]).unwrap();
        assert!(matches!(
            sample_gridded(&g, &a, 0),
            Err(Error::Uncountable { .. })
        ));
        assert!(matches!(
            brute_force_membership(&g, &perm("12")),
            Err(Error::Uncountable { .. })
        ));
    }
}

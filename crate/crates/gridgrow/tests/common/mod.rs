//! Brute-force oracles used by the integration suites.
//!
//! Everything here works straight from the gridding definition (explicit
//! division sequences and per-cell pattern checks) and never touches the
//! product-formula counting path it is used to verify.

use itertools::Itertools;
use num_bigint::BigUint;

use gridgrow::grid::{CellSpec, GridMatrix};
use gridgrow::perm::{avoids_all, Permutation};

/// All division sequences 1 = d_1 <= ... <= d_{parts+1} = n+1.
pub fn divisions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, parts: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == parts {
            cur.push(n + 1);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        let lo = *cur.last().unwrap();
        for d in lo..=n + 1 {
            cur.push(d);
            rec(i + 1, parts, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, parts, n, &mut vec![1], &mut out);
    out
}

/// The values of `perm` landing in cell (k, ℓ) under the given divisions,
/// in index order.
pub fn cell_content(
    perm: &Permutation,
    cs: &[usize],
    rs: &[usize],
    k: usize,
    l: usize,
) -> Vec<u32> {
    perm.entries()
        .iter()
        .enumerate()
        .filter(|&(i, &v)| {
            cs[k] <= i + 1 && i + 1 < cs[k + 1] && rs[l] as u32 <= v && v < rs[l + 1] as u32
        })
        .map(|(_, &v)| v)
        .collect()
}

fn cell_ok(cell: &CellSpec, content: &[u32]) -> bool {
    match cell {
        CellSpec::Empty => content.is_empty(),
        CellSpec::AvClass(basis) => {
            let std = Permutation::standardize(content).expect("distinct values");
            avoids_all(basis, &std)
        }
        CellSpec::DirectRate(_) => panic!("oracle cannot decide direct-rate cells"),
    }
}

pub fn gridding_is_valid(grid: &GridMatrix, perm: &Permutation, cs: &[usize], rs: &[usize]) -> bool {
    for k in 0..grid.cols() {
        for l in 0..grid.rows() {
            if !cell_ok(grid.cell(k, l), &cell_content(perm, cs, rs, k, l)) {
                return false;
            }
        }
    }
    true
}

pub fn all_permutations(n: usize) -> Vec<Permutation> {
    if n == 0 {
        return vec![Permutation::empty()];
    }
    (1..=n as u32)
        .permutations(n)
        .map(|entries| Permutation::new(entries).expect("generated permutation"))
        .collect()
}

/// Every (permutation, gridding) pair of length n, by exhaustive search.
pub fn enumerate_gridded(
    grid: &GridMatrix,
    n: usize,
) -> Vec<(Permutation, Vec<usize>, Vec<usize>)> {
    let col_seqs = divisions(n, grid.cols());
    let row_seqs = divisions(n, grid.rows());
    let mut out = Vec::new();
    for perm in all_permutations(n) {
        for cs in &col_seqs {
            for rs in &row_seqs {
                if gridding_is_valid(grid, &perm, cs, rs) {
                    out.push((perm.clone(), cs.clone(), rs.clone()));
                }
            }
        }
    }
    out
}

/// How many permutations of length n admit at least one gridding.
pub fn count_ungridded_oracle(grid: &GridMatrix, n: usize) -> BigUint {
    let col_seqs = divisions(n, grid.cols());
    let row_seqs = divisions(n, grid.rows());
    let mut count: u64 = 0;
    for perm in all_permutations(n) {
        let found = col_seqs
            .iter()
            .any(|cs| row_seqs.iter().any(|rs| gridding_is_valid(grid, &perm, cs, rs)));
        if found {
            count += 1;
        }
    }
    BigUint::from(count)
}

/// The occupancy of each cell under a gridding, flattened column-major with
/// the bottom row first.
pub fn occupancy_flat(
    grid: &GridMatrix,
    perm: &Permutation,
    cs: &[usize],
    rs: &[usize],
) -> Vec<u64> {
    let mut flat = Vec::with_capacity(grid.cols() * grid.rows());
    for k in 0..grid.cols() {
        for l in 0..grid.rows() {
            flat.push(cell_content(perm, cs, rs, k, l).len() as u64);
        }
    }
    flat
}

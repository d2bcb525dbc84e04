//! Compare gridded and ungridded counts: every member has at least one
//! gridding, and at most (n+1)^(t+u) of them, so the two counts pin each
//! other within a polynomial factor that the growth rate ignores.

use num_bigint::BigUint;

use gridgrow::{count_ungridded, parse_grid, GridCounter};

fn main() -> gridgrow::Result<()> {
    let grid = parse_grid("Av(12) Av(21)\nAv(21) Av(12)")?;
    let counter = GridCounter::new(&grid, 7)?;
    let exponent = (grid.cols() + grid.rows()) as u32;

    println!("skew-merged: members vs gridded members");
    println!(
        "{:>3}  {:>10}  {:>10}  {:>14}  sandwich",
        "n", "ungridded", "gridded", "(n+1)^4 * ung"
    );
    for n in 0..=7usize {
        let ungridded = count_ungridded(&grid, n)?;
        let gridded = counter.total(n as u64)?;
        let upper = BigUint::from(n as u64 + 1).pow(exponent) * &ungridded;
        let ok = ungridded <= gridded && gridded <= upper;
        println!("{n:>3}  {ungridded:>10}  {gridded:>10}  {upper:>14}  {ok}");
    }

    // a single permutation's witness, straight from the search
    let perm = gridgrow::Permutation::new(vec![3, 5, 1, 2, 6, 4])?;
    match gridgrow::brute_force_membership(&grid, &perm)? {
        Some(witness) => {
            println!(
                "\n{} is skew-merged: columns split at {:?}, rows at {:?}",
                perm,
                witness.col_divisions(),
                witness.row_divisions()
            );
        }
        None => println!("\n{perm} admits no gridding"),
    }
    Ok(())
}

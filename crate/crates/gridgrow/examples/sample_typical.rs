//! Draw uniformly random gridded permutations at the heaviest occupancy and
//! plot one: typical members follow the blueprint's cell proportions.

use gridgrow::{parse_grid, sample_gridded, GridCounter};

fn main() -> gridgrow::Result<()> {
    let grid = parse_grid("Av(12) Av(21)\nAv(21) Av(12)")?;
    let n = 24;
    let counter = GridCounter::new(&grid, n)?;
    let (argmax, _) = counter.argmax(n)?;

    println!("sampling at the weight-{n} argmax occupancy (top row first):");
    for l in (0..argmax.rows()).rev() {
        let row: Vec<String> = (0..argmax.cols())
            .map(|k| argmax.entry(k, l).to_string())
            .collect();
        println!("    [{}]", row.join(", "));
    }

    for seed in 0..3u64 {
        let w = sample_gridded(&grid, &argmax, seed)?;
        println!(
            "\nseed {seed}: {}\n  columns split at {:?}, rows at {:?}",
            w.perm(),
            w.col_divisions(),
            w.row_divisions()
        );
    }

    // dot plot of one draw, divisions marked
    let w = sample_gridded(&grid, &argmax, 7)?;
    let n = w.perm().len();
    let col_split = w.col_divisions()[1];
    let row_split = w.row_divisions()[1];
    println!("\nplot of the seed-7 draw:");
    for value in (1..=n as u32).rev() {
        if value + 1 == row_split as u32 {
            println!("  {}", "-".repeat(n + 1));
        }
        let mut line = String::from("  ");
        for (i, &v) in w.perm().entries().iter().enumerate() {
            if i + 1 == col_split {
                line.push('|');
            }
            line.push(if v == value { '*' } else { ' ' });
        }
        println!("{line}");
    }
    Ok(())
}

//! Count gridded permutations exactly, length by length, and watch the
//! ratio of consecutive counts approach the predicted growth rate.

use num_traits::ToPrimitive;

use gridgrow::{parse_grid, predict_growth_rate, GridCounter, GrowthRateCatalog};

fn main() -> gridgrow::Result<()> {
    let grid = parse_grid("Av(12) Av(21)\nAv(21) Av(12)")?;
    let catalog = GrowthRateCatalog::builtin();
    let (gr, _, _) = predict_growth_rate(&grid, &catalog)?;

    let max_n = 40;
    let counter = GridCounter::new(&grid, max_n)?;

    println!("skew-merged gridded counts (predicted growth rate {gr}):");
    println!("{:>4}  {:>42}  {:>10}", "n", "gridded", "ratio");
    let mut prev = None;
    for n in 0..=max_n {
        let count = counter.total(n)?;
        let ratio = prev
            .map(|p: f64| count.to_f64().unwrap() / p)
            .map(|r| format!("{r:.6}"))
            .unwrap_or_default();
        if n <= 12 || n % 4 == 0 {
            println!("{n:>4}  {count:>42}  {ratio:>10}");
        }
        prev = Some(count.to_f64().unwrap());
    }

    // the occupancy matrix carrying the largest share of the count
    let n = 24;
    let (argmax, best) = counter.argmax(n)?;
    let total = counter.total(n)?;
    println!("\nheaviest occupancy at n = {n} (top row first):");
    for l in (0..argmax.rows()).rev() {
        let row: Vec<String> = (0..argmax.cols())
            .map(|k| argmax.entry(k, l).to_string())
            .collect();
        println!("    [{}]", row.join(", "));
    }
    println!("contributing {best} of {total} gridded permutations");
    Ok(())
}

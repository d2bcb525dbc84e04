//! Predict the growth rate of a grid class from its Γ matrix.
//!
//! Run with `cargo run --example predict`, or point it at your own
//! grid-spec file: `cargo run --example predict -- path/to/my.grid`.

use gridgrow::{parse_grid, predict_growth_rate, GrowthRateCatalog};

fn main() -> gridgrow::Result<()> {
    let catalog = GrowthRateCatalog::builtin();

    let fixtures: Vec<(String, String)> = match std::env::args().nth(1) {
        Some(path) => {
            let text = std::fs::read_to_string(&path).expect("readable grid file");
            vec![(path, text)]
        }
        None => vec![
            (
                "skew-merged".into(),
                "Av(12) Av(21)\nAv(21) Av(12)".into(),
            ),
            (
                "321-over-increasing".into(),
                "Av(321) .\nAv(12) Av(12)".into(),
            ),
            ("monotone L".into(), "inc .\ninc inc".into()),
            ("juxtaposition".into(), "Av(21) Av(21)".into()),
        ],
    };

    for (name, text) in fixtures {
        let grid = parse_grid(&text)?;
        let (gr, result, x) = predict_growth_rate(&grid, &catalog)?;
        println!("{name}:");
        for line in grid.to_string().lines() {
            println!("    {line}");
        }
        println!("  growth rate  {gr:.12}");
        println!("  singular s   {:.12}", result.s);
        println!("  r (columns)  {:?}", result.r);
        println!("  c (rows)     {:?}", result.c);
        println!("  blueprint occupancies (top row first):");
        for l in (0..x.rows()).rev() {
            let row: Vec<String> = (0..x.cols())
                .map(|k| format!("{:.6}", x.entry(k, l)))
                .collect();
            println!("    [{}]", row.join(", "));
        }
        println!();
    }
    Ok(())
}

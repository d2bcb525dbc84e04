//! Maximize f by random search plus hill climbing and compare against the
//! spectral answer: the search can approach s² from below but never beat it.

use gridgrow::spectral::{build_gamma, top_singular_triple, DEFAULT_TOL};
use gridgrow::variational::simplex_search;
use gridgrow::{parse_grid, GrowthRateCatalog};

fn main() -> gridgrow::Result<()> {
    let catalog = GrowthRateCatalog::builtin();
    for (name, text) in [
        ("skew-merged", "Av(12) Av(21)\nAv(21) Av(12)"),
        ("321-over-increasing", "Av(321) .\nAv(12) Av(12)"),
        ("monotone L", "inc .\ninc inc"),
    ] {
        let gamma = build_gamma(&parse_grid(text)?, &catalog)?;
        let s2 = top_singular_triple(&gamma, DEFAULT_TOL)?.gr;
        println!("{name}: s^2 = {s2:.12}");
        for draws in [100u64, 1_000, 10_000, 100_000] {
            let out = simplex_search(&gamma, draws, 2024)?;
            println!(
                "    {draws:>6} draws -> f_best = {:.12} (gap {:+.3e})",
                out.f_best,
                s2 - out.f_best
            );
        }
        println!();
    }
    Ok(())
}

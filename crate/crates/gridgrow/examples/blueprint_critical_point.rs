//! The blueprint matrix Γ∘(r⊗c)/s is where the variational function f
//! attains its maximum s². This example evaluates f there, checks the
//! Lagrange ratios, and shows the gradient vanishing along the simplex.

use gridgrow::spectral::{blueprint_x, build_gamma, top_singular_triple, DEFAULT_TOL};
use gridgrow::variational::{f_eval, finite_diff_check, grad_log_f, lagrange_residual};
use gridgrow::{parse_grid, GrowthRateCatalog};

fn main() -> gridgrow::Result<()> {
    let grid = parse_grid("Av(321) .\nAv(12) Av(12)")?;
    let gamma = build_gamma(&grid, &GrowthRateCatalog::builtin())?;
    let result = top_singular_triple(&gamma, DEFAULT_TOL)?;
    let x = blueprint_x(&gamma, &result)?;

    println!("grid:");
    for line in grid.to_string().lines() {
        println!("    {line}");
    }
    println!("s^2 (predicted growth rate) = {:.12}", result.gr);
    println!("\nblueprint X (top row first):");
    for l in (0..x.rows()).rev() {
        let row: Vec<String> = (0..x.cols())
            .map(|k| format!("{:.9}", x.entry(k, l)))
            .collect();
        println!("    [{}]", row.join(", "));
    }

    println!("\nf(X)              = {:.12}", f_eval(&gamma, &x)?);
    println!("lagrange residual = {:.3e}", lagrange_residual(&gamma, &x)?);
    println!(
        "finite-diff error = {:.3e}",
        finite_diff_check(&gamma, &x, 1e-6)?
    );

    // at a critical point all partials of log f agree (they equal log s²)
    println!("\npartials of log f over supp(X):");
    for ((k, l), d) in grad_log_f(&gamma, &x)? {
        println!("    cell ({}, {}): {d:.12}", k + 1, l + 1);
    }
    println!("log s^2            : {:.12}", result.gr.ln());
    Ok(())
}

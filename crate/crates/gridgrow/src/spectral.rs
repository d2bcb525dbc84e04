//! The Γ matrix of a grid, its top singular triple, and the blueprint
//! occupancy matrix built from it.
//!
//! Γ holds the square roots of the cell growth rates (zero on empty cells);
//! the predicted growth rate of the grid class is the greatest eigenvalue
//! of Γ applied after its transpose, i.e. the square of the greatest
//! singular value of Γ.

use crate::catalog::GrowthRateCatalog;
use crate::error::{Error, Result};
use crate::grid::{CellSpec, GridMatrix};
use crate::variational::UnitWeightMatrix;

/// Convergence tolerance used when none is supplied.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Iteration budget for power iteration.
pub const MAX_ITERATIONS: u64 = 1_000_000;

/// Blueprint entries below this fraction of the largest entry are iteration
/// residue on cells where the exact singular pair is zero; they are snapped
/// to exact zeros.
const BLUEPRINT_DUST: f64 = 1e-12;

/// Square roots of cell growth rates, Cartesian-indexed like the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaMatrix {
    cols: usize,
    rows: usize,
    /// index k * rows + ℓ
    data: Vec<f64>,
}

impl GammaMatrix {
    /// Entries must be 0 (empty cell) or >= 1 (infinite class), with at
    /// least one positive entry.
    pub fn new(cols: usize, rows: usize, data: Vec<f64>) -> Result<Self> {
        if cols == 0 || rows == 0 || data.len() != cols * rows {
            return Err(Error::Dimension(format!(
                "expected {cols}x{rows} = {} entries, got {}",
                cols * rows,
                data.len()
            )));
        }
        for &v in &data {
            if !v.is_finite() || (v != 0.0 && v < 1.0) {
                return Err(Error::Domain(format!(
                    "gamma entries must be 0 or >= 1, got {v}"
                )));
            }
        }
        if data.iter().all(|&v| v == 0.0) {
            return Err(Error::Domain("gamma matrix has empty support".into()));
        }
        Ok(Self { cols, rows, data })
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn entry(&self, k: usize, l: usize) -> f64 {
        self.data[k * self.rows + l]
    }

    /// Indices of positive entries, column-major with the bottom row first.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for k in 0..self.cols {
            for l in 0..self.rows {
                if self.entry(k, l) > 0.0 {
                    out.push((k, l));
                }
            }
        }
        out
    }

    /// (Γ v)_k = Σ_ℓ Γ_{k,ℓ} v_ℓ, the column-side output of length t.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|k| {
                (0..self.rows)
                    .map(|l| self.entry(k, l) * v[l])
                    .sum()
            })
            .collect()
    }

    /// (Γ^T w)_ℓ = Σ_k Γ_{k,ℓ} w_k, the row-side output of length u.
    pub fn apply_transpose(&self, w: &[f64]) -> Vec<f64> {
        assert_eq!(w.len(), self.cols);
        (0..self.rows)
            .map(|l| {
                (0..self.cols)
                    .map(|k| self.entry(k, l) * w[k])
                    .sum()
            })
            .collect()
    }

    /// The transposed matrix (columns and rows swapped).
    pub fn transposed(&self) -> GammaMatrix {
        let mut data = vec![0.0; self.data.len()];
        for k in 0..self.cols {
            for l in 0..self.rows {
                data[l * self.cols + k] = self.entry(k, l);
            }
        }
        GammaMatrix {
            cols: self.rows,
            rows: self.cols,
            data,
        }
    }
}

/// Greatest singular value of Γ with its nonnegative singular vectors.
///
/// `r` is the column-side vector (length t), `c` the row-side vector
/// (length u); Γ applied to c equals s·r and Γ-transpose applied to r
/// equals s·c. `gr` is s², the predicted growth rate.
#[derive(Clone, Debug)]
pub struct SpectralResult {
    pub s: f64,
    pub r: Vec<f64>,
    pub c: Vec<f64>,
    pub gr: f64,
}

/// Builds Γ from a grid: 0 on empty cells, sqrt(growth rate) elsewhere.
///
/// Avoidance-class cells resolve through the catalog; direct-rate cells use
/// their given rate. Finite classes are rejected; they would contribute
/// growth rate 0 and the model assumes empty-or-infinite cells.
pub fn build_gamma(grid: &GridMatrix, catalog: &GrowthRateCatalog) -> Result<GammaMatrix> {
    let (t, u) = (grid.cols(), grid.rows());
    let mut data = vec![0.0; t * u];
    let mut finite = Vec::new();
    let mut unknown = Vec::new();
    for k in 0..t {
        for l in 0..u {
            match grid.cell(k, l) {
                CellSpec::Empty => {}
                CellSpec::DirectRate(gr) => data[k * u + l] = gr.sqrt(),
                CellSpec::AvClass(basis) => {
                    if basis.is_finite_class() {
                        finite.push((k + 1, l + 1));
                    } else if let Some(gr) = catalog.lookup(basis) {
                        data[k * u + l] = gr.sqrt();
                    } else {
                        unknown.push((k + 1, l + 1));
                    }
                }
            }
        }
    }
    if !finite.is_empty() {
        return Err(Error::FiniteClass(finite));
    }
    if !unknown.is_empty() {
        return Err(Error::UnknownGrowthRate(unknown));
    }
    GammaMatrix::new(t, u, data)
}

/// Computes the greatest singular value and nonnegative singular vectors by
/// power iteration on Γ-transpose-after-Γ from a uniform positive start.
///
/// Iteration stops when the eigen-residual ‖Gc − λc‖∞ drops below
/// tol·max(1, λ); the plain Rayleigh-difference test converges earlier than
/// the vectors do, which is not enough for the downstream critical-point
/// checks.
pub fn top_singular_triple(gamma: &GammaMatrix, tol: f64) -> Result<SpectralResult> {
    let u = gamma.rows();
    let mut c = vec![1.0 / (u as f64).sqrt(); u];
    let mut last_residual = f64::INFINITY;
    for _iter in 0..MAX_ITERATIONS {
        let w = gamma.apply(&c);
        let z = gamma.apply_transpose(&w); // z = Γ^T Γ c
        let lambda: f64 = c.iter().zip(&z).map(|(a, b)| a * b).sum();
        last_residual = z
            .iter()
            .zip(&c)
            .map(|(zi, ci)| (zi - lambda * ci).abs())
            .fold(0.0, f64::max);
        if last_residual <= tol * lambda.max(1.0) {
            let s = lambda.sqrt();
            // r = Γc/s is exactly unit given λ = c·(Γ^T Γ c): no rescaling
            let r: Vec<f64> = w.iter().map(|x| x / s).collect();
            return Ok(SpectralResult {
                s,
                r,
                c,
                gr: s * s,
            });
        }
        let norm = z.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (ci, zi) in c.iter_mut().zip(&z) {
            *ci = zi / norm;
        }
    }
    Err(Error::NonConvergence {
        iters: MAX_ITERATIONS,
        residual: last_residual,
    })
}

/// The blueprint occupancy matrix X with X_{k,ℓ} = Γ_{k,ℓ} r_k c_ℓ / s:
/// the Hadamard product of Γ with r⊗c, normalized to unit weight. Typical
/// members of the grid class distribute their entries according to X.
pub fn blueprint_x(gamma: &GammaMatrix, result: &SpectralResult) -> Result<UnitWeightMatrix> {
    if result.s <= 0.0 {
        return Err(Error::Domain(
            "blueprint undefined for zero singular value".into(),
        ));
    }
    let (t, u) = (gamma.cols(), gamma.rows());
    let mut entries = vec![0.0; t * u];
    for k in 0..t {
        for l in 0..u {
            entries[k * u + l] = gamma.entry(k, l) * result.r[k] * result.c[l] / result.s;
        }
    }
    let max = entries.iter().cloned().fold(0.0, f64::max);
    for e in &mut entries {
        if *e < max * BLUEPRINT_DUST {
            *e = 0.0;
        }
    }
    let weight: f64 = entries.iter().sum();
    for e in &mut entries {
        *e /= weight;
    }
    UnitWeightMatrix::new(gamma, entries)
}

/// Greatest eigenvalue of the symmetric (t+u)×(t+u) block matrix with Γ and
/// its transpose off-diagonal (the bipartite form); equals the greatest
/// singular value of Γ.
///
/// The block matrix has a sign-symmetric spectrum, so the iteration runs on
/// the identity-shifted matrix, whose top eigenvalue 1 + s is strictly
/// dominant in magnitude.
pub fn bipartite_block_eigenvalue(gamma: &GammaMatrix) -> Result<f64> {
    let (t, u) = (gamma.cols(), gamma.rows());
    let dim = t + u;
    let mut v = vec![1.0 / (dim as f64).sqrt(); dim];
    let mut last_residual = f64::INFINITY;
    for _iter in 0..MAX_ITERATIONS {
        let top = gamma.apply(&v[t..]);
        let bottom = gamma.apply_transpose(&v[..t]);
        let w: Vec<f64> = top
            .iter()
            .chain(bottom.iter())
            .zip(&v)
            .map(|(bv, vi)| bv + vi)
            .collect();
        let mu: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        last_residual = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - mu * vi).abs())
            .fold(0.0, f64::max);
        if last_residual <= DEFAULT_TOL * mu.abs().max(1.0) {
            return Ok(mu - 1.0);
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / norm;
        }
    }
    Err(Error::NonConvergence {
        iters: MAX_ITERATIONS,
        residual: last_residual,
    })
}

/// The full pipeline: Γ from the grid, top singular triple, blueprint.
/// Returns (predicted growth rate, spectral result, blueprint matrix).
pub fn predict_growth_rate(
    grid: &GridMatrix,
    catalog: &GrowthRateCatalog,
) -> Result<(f64, SpectralResult, UnitWeightMatrix)> {
    predict_growth_rate_with_tol(grid, catalog, DEFAULT_TOL)
}

pub fn predict_growth_rate_with_tol(
    grid: &GridMatrix,
    catalog: &GrowthRateCatalog,
    tol: f64,
) -> Result<(f64, SpectralResult, UnitWeightMatrix)> {
    let gamma = build_gamma(grid, catalog)?;
    let result = top_singular_triple(&gamma, tol)?;
    let x = blueprint_x(&gamma, &result)?;
    Ok((result.gr, result, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::parse_grid;

    const GOLDEN: f64 = 1.618033988749895;
    const FIG1_GR: f64 = 5.23606797749979; // 3 + sqrt(5)

    fn catalog() -> GrowthRateCatalog {
        GrowthRateCatalog::builtin()
    }

    fn gamma_of(text: &str) -> GammaMatrix {
        build_gamma(&parse_grid(text).unwrap(), &catalog()).unwrap()
    }

    #[test]
    fn gamma_for_skew_merged_is_all_ones() {
        let g = gamma_of("Av(12) Av(21)\nAv(21) Av(12)");
        for k in 0..2 {
            for l in 0..2 {
                assert_eq!(g.entry(k, l), 1.0);
            }
        }
    }

    #[test]
    fn gamma_for_fig1_right() {
        let g = gamma_of("Av(321) .\nAv(12) Av(12)");
        assert_eq!(g.entry(0, 1), 2.0); // sqrt(4)
        assert_eq!(g.entry(1, 1), 0.0);
        assert_eq!(g.entry(0, 0), 1.0);
        assert_eq!(g.entry(1, 0), 1.0);
    }

    #[test]
    fn gamma_for_direct_rate() {
        let g = gamma_of("gr=2.25 .\n. inc");
        assert_eq!(g.entry(0, 1), 1.5);
    }

    #[test]
    fn gamma_rejects_unknown_and_finite_cells() {
        let unknown = parse_grid("Av(1234) inc").unwrap();
        assert!(matches!(
            build_gamma(&unknown, &catalog()),
            Err(Error::UnknownGrowthRate(cells)) if cells == vec![(1, 1)]
        ));
        let finite = parse_grid("Av(12,21) inc").unwrap();
        assert!(matches!(
            build_gamma(&finite, &catalog()),
            Err(Error::FiniteClass(cells)) if cells == vec![(1, 1)]
        ));
    }

    #[test]
    fn skew_merged_triple() {
        let g = gamma_of("Av(12) Av(21)\nAv(21) Av(12)");
        let res = top_singular_triple(&g, DEFAULT_TOL).unwrap();
        assert!((res.s - 2.0).abs() < 1e-12);
        assert!((res.gr - 4.0).abs() < 1e-12);
        let inv_sqrt2 = 0.5f64.sqrt();
        for v in res.r.iter().chain(res.c.iter()) {
            assert!((v - inv_sqrt2).abs() < 1e-12);
        }
    }

    #[test]
    fn fig1_right_triple_and_blueprint() {
        let g = gamma_of("Av(321) .\nAv(12) Av(12)");
        let res = top_singular_triple(&g, DEFAULT_TOL).unwrap();
        assert!((res.gr - FIG1_GR).abs() < 1e-9);
        let x = blueprint_x(&g, &res).unwrap();
        assert_eq!(x.support().len(), 3);
        assert_eq!(x.entry(1, 1), 0.0);
        assert!((x.weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_gamma() {
        let g = GammaMatrix::new(2, 2, vec![0.0, 3.0, 0.0, 0.0]).unwrap();
        let res = top_singular_triple(&g, DEFAULT_TOL).unwrap();
        assert!((res.s - 3.0).abs() < 1e-12);
        assert!((res.gr - 9.0).abs() < 1e-11);
        assert!((bipartite_block_eigenvalue(&g).unwrap() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn skew_blueprint_is_uniform() {
        let g = gamma_of("Av(12) Av(21)\nAv(21) Av(12)");
        let res = top_singular_triple(&g, DEFAULT_TOL).unwrap();
        let x = blueprint_x(&g, &res).unwrap();
        for k in 0..2 {
            for l in 0..2 {
                assert!((x.entry(k, l) - 0.25).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_pair_residuals_are_small() {
        for text in [
            "Av(12) Av(21)\nAv(21) Av(12)",
            "Av(321) .\nAv(12) Av(12)",
            "inc .\ninc inc",
            "Av(21) Av(21)",
        ] {
            let g = gamma_of(text);
            let res = top_singular_triple(&g, DEFAULT_TOL).unwrap();
            let gc = g.apply(&res.c);
            let gtr = g.apply_transpose(&res.r);
            for (i, v) in gc.iter().enumerate() {
                assert!((v - res.s * res.r[i]).abs() <= 1e-8, "{text}");
            }
            for (i, v) in gtr.iter().enumerate() {
                assert!((v - res.s * res.c[i]).abs() <= 1e-8, "{text}");
            }
            let norm_r: f64 = res.r.iter().map(|x| x * x).sum::<f64>().sqrt();
            let norm_c: f64 = res.c.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm_r - 1.0).abs() < 1e-10);
            assert!((norm_c - 1.0).abs() < 1e-10);
            assert!(res.r.iter().chain(res.c.iter()).all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn monotone_l_matches_golden_ratio() {
        let g = gamma_of("inc .\ninc inc");
        let res = top_singular_triple(&g, DEFAULT_TOL).unwrap();
        assert!((res.gr - GOLDEN * GOLDEN).abs() < 1e-9);
        let bip = bipartite_block_eigenvalue(&g).unwrap();
        assert!((bip - GOLDEN).abs() < 1e-9);
        assert!((bip * bip - res.gr).abs() < 1e-9);
    }

    #[test]
    fn bipartite_matches_singular_value_on_fixtures() {
        for text in [
            "Av(12) Av(21)\nAv(21) Av(12)",
            "Av(321) .\nAv(12) Av(12)",
            "Av(21) Av(21)",
        ] {
            let g = gamma_of(text);
            let s = top_singular_triple(&g, DEFAULT_TOL).unwrap().s;
            let b = bipartite_block_eigenvalue(&g).unwrap();
            assert!((b * b - s * s).abs() < 1e-9, "{text}");
        }
    }

    #[test]
    fn transpose_gives_same_singular_value() {
        for text in ["Av(321) .\nAv(12) Av(12)", "Av(21) Av(21)", "inc\ndec"] {
            let g = gamma_of(text);
            let s1 = top_singular_triple(&g, DEFAULT_TOL).unwrap().s;
            let s2 = top_singular_triple(&g.transposed(), DEFAULT_TOL).unwrap().s;
            assert!((s1 - s2).abs() < 1e-9, "{text}");
        }
    }

    #[test]
    fn block_diagonal_tie_still_converges() {
        // two decoupled cells with equal rates: degenerate top eigenvalue
        let g = GammaMatrix::new(2, 2, vec![2.0, 0.0, 0.0, 2.0]).unwrap();
        let res = top_singular_triple(&g, DEFAULT_TOL).unwrap();
        assert!((res.s - 2.0).abs() < 1e-10);
        assert!(res.r.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn predict_pipeline() {
        let grid = parse_grid("Av(21) Av(21)").unwrap();
        let (gr, res, x) = predict_growth_rate(&grid, &catalog()).unwrap();
        assert!((gr - 2.0).abs() < 1e-12);
        assert!((res.s - 2.0f64.sqrt()).abs() < 1e-12);
        assert!((x.entry(0, 0) - 0.5).abs() < 1e-12);
        assert!((x.entry(1, 0) - 0.5).abs() < 1e-12);
    }
}

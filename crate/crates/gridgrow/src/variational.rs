//! The variational function f on the admissible domain, its gradient, the
//! critical-point (Lagrange) conditions, and an independent search oracle
//! for the maximum.
//!
//! For a unit-weight matrix X supported inside supp(Γ),
//!
//! ```text
//! f(X) = ∏_{k,ℓ} ( Γ_{k,ℓ}² · colsum_k(X) · rowsum_ℓ(X) / X_{k,ℓ}² )^{X_{k,ℓ}}
//! ```
//!
//! with zero entries contributing factor 1. The maximum of f over the
//! admissible domain equals the squared greatest singular value of Γ, and
//! is attained at the blueprint matrix.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::GammaMatrix;

/// Tolerance on |weight - 1| accepted at construction.
pub const UNIT_WEIGHT_TOL: f64 = 1e-12;

/// A t×u nonnegative real matrix of unit weight supported inside supp(Γ):
/// a point of the admissible domain.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitWeightMatrix {
    cols: usize,
    rows: usize,
    /// index k * rows + ℓ
    entries: Vec<f64>,
}

impl UnitWeightMatrix {
    pub fn new(gamma: &GammaMatrix, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != gamma.cols() * gamma.rows() {
            return Err(Error::Dimension(format!(
                "expected {} entries, got {}",
                gamma.cols() * gamma.rows(),
                entries.len()
            )));
        }
        let mut weight = 0.0;
        for k in 0..gamma.cols() {
            for l in 0..gamma.rows() {
                let x = entries[k * gamma.rows() + l];
                if !x.is_finite() || x < 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "entry ({}, {}) = {x} must be a finite nonnegative real",
                        k + 1,
                        l + 1
                    )));
                }
                if x > 0.0 && gamma.entry(k, l) == 0.0 {
                    return Err(Error::Inadmissible {
                        col: k + 1,
                        row: l + 1,
                    });
                }
                weight += x;
            }
        }
        if (weight - 1.0).abs() > UNIT_WEIGHT_TOL {
            return Err(Error::InvalidInput(format!(
                "weight {weight} is not 1 within {UNIT_WEIGHT_TOL:e}"
            )));
        }
        Ok(Self {
            cols: gamma.cols(),
            rows: gamma.rows(),
            entries,
        })
    }

    /// Equal mass on every cell of supp(Γ).
    pub fn uniform(gamma: &GammaMatrix) -> Self {
        let support = gamma.support();
        let mass = 1.0 / support.len() as f64;
        let mut entries = vec![0.0; gamma.cols() * gamma.rows()];
        for (k, l) in support {
            entries[k * gamma.rows() + l] = mass;
        }
        Self {
            cols: gamma.cols(),
            rows: gamma.rows(),
            entries,
        }
    }

    /// All mass on one cell.
    pub fn singleton(gamma: &GammaMatrix, k: usize, l: usize) -> Result<Self> {
        let mut entries = vec![0.0; gamma.cols() * gamma.rows()];
        entries[k * gamma.rows() + l] = 1.0;
        Self::new(gamma, entries)
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn entry(&self, k: usize, l: usize) -> f64 {
        self.entries[k * self.rows + l]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn weight(&self) -> f64 {
        self.entries.iter().sum()
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

    pub fn col_sum(&self, k: usize) -> f64 {
        (0..self.rows).map(|l| self.entry(k, l)).sum()
    }

    pub fn row_sum(&self, l: usize) -> f64 {
        (0..self.cols).map(|k| self.entry(k, l)).sum()
    }
}

fn check_admissible(gamma: &GammaMatrix, x: &UnitWeightMatrix) -> Result<()> {
    if x.cols() != gamma.cols() || x.rows() != gamma.rows() {
        return Err(Error::Dimension(format!(
            "matrix is {}x{} but gamma is {}x{}",
            x.cols(),
            x.rows(),
            gamma.cols(),
            gamma.rows()
        )));
    }
    for (k, l) in x.support() {
        if gamma.entry(k, l) == 0.0 {
            return Err(Error::Inadmissible {
                col: k + 1,
                row: l + 1,
            });
        }
    }
    Ok(())
}

/// log f of the raw product form, defined for any nonnegative admissible
/// entries (not only unit weight); zero entries contribute log-term 0.
/// Scales as log f(λX) = λ log f(X).
pub(crate) fn log_f_entries(gamma: &GammaMatrix, entries: &[f64]) -> f64 {
    let (t, u) = (gamma.cols(), gamma.rows());
    let mut col_sums = vec![0.0; t];
    let mut row_sums = vec![0.0; u];
    for k in 0..t {
        for l in 0..u {
            let x = entries[k * u + l];
            col_sums[k] += x;
            row_sums[l] += x;
        }
    }
    let mut log_f = 0.0;
    for k in 0..t {
        for l in 0..u {
            let x = entries[k * u + l];
            if x > 0.0 {
                log_f += x
                    * (2.0 * gamma.entry(k, l).ln() + col_sums[k].ln() + row_sums[l].ln()
                        - 2.0 * x.ln());
            }
        }
    }
    log_f
}

/// Evaluates f at a point of the admissible domain.
pub fn f_eval(gamma: &GammaMatrix, x: &UnitWeightMatrix) -> Result<f64> {
    check_admissible(gamma, x)?;
    Ok(log_f_entries(gamma, x.entries()).exp())
}

/// The partial derivative of log f at one support cell:
/// 2 log Γ plus the column contribution (log colsum − log X) plus the row
/// contribution (log rowsum − log X). Both contributions are nonnegative,
/// as are the partials.
pub fn partial_log_f(gamma: &GammaMatrix, x: &UnitWeightMatrix, k: usize, l: usize) -> Result<f64> {
    check_admissible(gamma, x)?;
    let xv = x.entry(k, l);
    if xv == 0.0 {
        return Err(Error::ZeroEntryGradient {
            col: k + 1,
            row: l + 1,
        });
    }
    Ok(2.0 * gamma.entry(k, l).ln() + (x.col_sum(k).ln() - xv.ln())
        + (x.row_sum(l).ln() - xv.ln()))
}

/// All partials of log f over supp(X), in support order.
pub fn grad_log_f(
    gamma: &GammaMatrix,
    x: &UnitWeightMatrix,
) -> Result<Vec<((usize, usize), f64)>> {
    check_admissible(gamma, x)?;
    x.support()
        .into_iter()
        .map(|(k, l)| partial_log_f(gamma, x, k, l).map(|d| ((k, l), d)))
        .collect()
}

/// Relative spread of the critical-point ratios
/// ρ_{k,ℓ} = Γ_{k,ℓ} √colsum_k √rowsum_ℓ / X_{k,ℓ} over supp(X):
/// (max ρ − min ρ) / mean ρ. Zero iff the Lagrange conditions hold, in
/// which case the common ratio is the singular value s.
///
/// A single-cell support is the degenerate critical point; its residual is
/// 0 by convention.
pub fn lagrange_residual(gamma: &GammaMatrix, x: &UnitWeightMatrix) -> Result<f64> {
    check_admissible(gamma, x)?;
    let support = x.support();
    if support.is_empty() {
        return Err(Error::InvalidInput("matrix has empty support".into()));
    }
    if support.len() == 1 {
        return Ok(0.0);
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for &(k, l) in &support {
        let rho =
            gamma.entry(k, l) * x.col_sum(k).sqrt() * x.row_sum(l).sqrt() / x.entry(k, l);
        min = min.min(rho);
        max = max.max(rho);
        sum += rho;
    }
    Ok((max - min) / (sum / support.len() as f64))
}

/// Validates the gradient formula against centered differences along
/// weight-preserving pair directions e_p − e_q; returns the worst relative
/// error |analytic − numeric| / max(1, |analytic|) over all support pairs.
pub fn finite_diff_check(gamma: &GammaMatrix, x: &UnitWeightMatrix, h: f64) -> Result<f64> {
    check_admissible(gamma, x)?;
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::InvalidInput(format!("step h = {h} must be positive")));
    }
    let support = x.support();
    if support.len() <= 1 {
        // no weight-preserving pair directions to check
        return Ok(0.0);
    }
    for &(k, l) in &support {
        let v = x.entry(k, l);
        if v - h <= 0.0 || v + h >= 1.0 {
            return Err(Error::StepTooLarge {
                col: k + 1,
                row: l + 1,
                step: h,
            });
        }
    }
    let u = gamma.rows();
    let mut worst: f64 = 0.0;
    for i in 0..support.len() {
        for j in (i + 1)..support.len() {
            let (pk, pl) = support[i];
            let (qk, ql) = support[j];
            let analytic =
                partial_log_f(gamma, x, pk, pl)? - partial_log_f(gamma, x, qk, ql)?;
            let mut fwd = x.entries().to_vec();
            fwd[pk * u + pl] += h;
            fwd[qk * u + ql] -= h;
            let mut bwd = x.entries().to_vec();
            bwd[pk * u + pl] -= h;
            bwd[qk * u + ql] += h;
            let numeric =
                (log_f_entries(gamma, &fwd) - log_f_entries(gamma, &bwd)) / (2.0 * h);
            let err = (analytic - numeric).abs() / analytic.abs().max(1.0);
            worst = worst.max(err);
        }
    }
    Ok(worst)
}

/// Hyperparameters of the search oracle.
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Number of random unit-weight draws (symmetric Dirichlet over
    /// supp(Γ), concentration 1).
    pub draws: u64,
    pub seed: u64,
    /// How many of the best draws get hill-climbed.
    pub climb_starts: usize,
    /// Rounds of coordinate-pair climbing; the step shrinks each round.
    pub climb_rounds: usize,
    pub shrink: f64,
    pub initial_step: f64,
    /// Passes over all pairs per round, stopping early when none improves.
    pub max_sweeps_per_round: usize,
}

impl SearchOptions {
    pub fn new(draws: u64, seed: u64) -> Self {
        Self {
            draws,
            seed,
            climb_starts: 5,
            climb_rounds: 60,
            shrink: 0.5,
            initial_step: 0.25,
            max_sweeps_per_round: 4,
        }
    }
}

/// Best point found by [`simplex_search`].
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub x_best: UnitWeightMatrix,
    pub f_best: f64,
}

/// Independent maximization oracle for f: random Dirichlet draws over the
/// admissible simplex followed by coordinate-pair hill climbing with a
/// shrinking step, from the best draws. Deterministic for a fixed seed,
/// regardless of thread count.
pub fn simplex_search(gamma: &GammaMatrix, draws: u64, seed: u64) -> Result<SearchOutcome> {
    simplex_search_with(gamma, SearchOptions::new(draws, seed))
}

pub fn simplex_search_with(gamma: &GammaMatrix, opts: SearchOptions) -> Result<SearchOutcome> {
    if opts.draws == 0 {
        return Err(Error::InvalidInput("need at least one draw".into()));
    }
    let support = gamma.support();
    let m = support.len();
    if m == 1 {
        // one-point domain: f is exactly the squared entry
        let (k, l) = support[0];
        let x = UnitWeightMatrix::singleton(gamma, k, l)?;
        let g = gamma.entry(k, l);
        return Ok(SearchOutcome {
            x_best: x,
            f_best: g * g,
        });
    }

    // Score all draws; each draw has its own RNG stream so the result does
    // not depend on evaluation order.
    let mut scored: Vec<(f64, u64)> = (0..opts.draws)
        .into_par_iter()
        .map(|i| {
            let masses = dirichlet_draw(opts.seed, i, m);
            let entries = scatter(gamma, &support, &masses);
            (log_f_entries(gamma, &entries), i)
        })
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut best_log_f = f64::NEG_INFINITY;
    let mut best_entries: Option<Vec<f64>> = None;
    for &(_, draw_idx) in scored.iter().take(opts.climb_starts) {
        let masses = dirichlet_draw(opts.seed, draw_idx, m);
        let mut entries = scatter(gamma, &support, &masses);
        let log_f = climb(gamma, &support, &mut entries, &opts);
        if log_f > best_log_f {
            best_log_f = log_f;
            best_entries = Some(entries);
        }
    }

    let mut entries = best_entries.expect("at least one climb start");
    let weight: f64 = entries.iter().sum();
    for e in &mut entries {
        *e /= weight;
    }
    let x_best = UnitWeightMatrix::new(gamma, entries)?;
    let f_best = f_eval(gamma, &x_best)?;
    Ok(SearchOutcome { x_best, f_best })
}

/// One symmetric Dirichlet(1) draw as normalized unit exponentials.
fn dirichlet_draw(seed: u64, index: u64, m: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut masses: Vec<f64> = (0..m)
        .map(|_| -(1.0 - rng.gen::<f64>()).ln())
        .collect();
    let total: f64 = masses.iter().sum();
    for v in &mut masses {
        *v /= total;
    }
    masses
}

fn scatter(gamma: &GammaMatrix, support: &[(usize, usize)], masses: &[f64]) -> Vec<f64> {
    let mut entries = vec![0.0; gamma.cols() * gamma.rows()];
    for (&(k, l), &v) in support.iter().zip(masses) {
        entries[k * gamma.rows() + l] = v;
    }
    entries
}

/// Coordinate-pair pattern search: move mass `step` between support cells
/// whenever that improves log f, shrinking the step each round.
fn climb(
    gamma: &GammaMatrix,
    support: &[(usize, usize)],
    entries: &mut [f64],
    opts: &SearchOptions,
) -> f64 {
    let u = gamma.rows();
    let idx: Vec<usize> = support.iter().map(|&(k, l)| k * u + l).collect();
    let mut current = log_f_entries(gamma, entries);
    let mut step = opts.initial_step;
    for _round in 0..opts.climb_rounds {
        for _sweep in 0..opts.max_sweeps_per_round {
            let mut improved = false;
            for &p in &idx {
                for &q in &idx {
                    if p == q || entries[q] == 0.0 {
                        continue;
                    }
                    let delta = step.min(entries[q]);
                    let saved = (entries[p], entries[q]);
                    entries[p] += delta;
                    entries[q] -= delta;
                    let candidate = log_f_entries(gamma, entries);
                    if candidate > current {
                        current = candidate;
                        improved = true;
                    } else {
                        entries[p] = saved.0;
                        entries[q] = saved.1;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        // keep the weight pinned; moves only round-trip mass
        let weight: f64 = entries.iter().sum();
        for e in entries.iter_mut() {
            *e /= weight;
        }
        current = log_f_entries(gamma, entries);
        step *= opts.shrink;
    }
    current
}

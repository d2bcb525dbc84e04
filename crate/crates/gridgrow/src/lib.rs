//! Growth rates of permutation grid classes.
//!
//! A grid class is described by a matrix of permutation classes: a
//! permutation belongs to the class when some division of its plot into
//! cells puts, in each cell, a pattern from that cell's class. This crate
//! computes the growth rate of such a class as the greatest eigenvalue of
//! Γ^T Γ, where Γ holds the square roots of the cell growth rates, and
//! verifies the prediction several independent ways:
//!
//! * exact counts of gridded permutations by length ([`count`]), whose
//!   ratios approach the predicted rate;
//! * the variational function f on unit-weight occupancy matrices
//!   ([`variational`]), maximized exactly at the spectral blueprint;
//! * brute-force membership and the gridded/ungridded sandwich bounds
//!   ([`gridding`]);
//! * uniform random sampling of gridded permutations at a fixed occupancy.
//!
//! Start with the runnable examples (`cargo run --example predict`) or the
//! `gridgrow` binary, which exposes the same pipeline on grid-spec files.

pub mod catalog;
pub mod count;
pub mod error;
pub mod grid;
pub mod gridding;
pub mod perm;
pub mod report;
pub mod run;
pub mod spectral;
pub mod variational;

pub use catalog::GrowthRateCatalog;
pub use count::{
    admissible_weight_matrices, argmax_weight_matrix, binomial, count_gridded_fixed,
    count_gridded_total, CellCountTable, GridCounter, WeightMatrix,
};
pub use error::{Error, Result};
pub use grid::{parse_grid, CellSpec, GridMatrix};
pub use gridding::{
    brute_force_membership, brute_force_membership_with_caps, count_ungridded,
    count_ungridded_with_caps, sample_gridded, BruteForceCaps, GriddedPermutation,
};
pub use perm::{
    avoids_all, contains, enumerate_av, order_isomorphic, AvEnumerator, Basis, CountSequence,
    Permutation,
};
pub use run::{exit_code_for, run, Command, OutputFormat, RunConfig, RunOutput};
pub use spectral::{
    bipartite_block_eigenvalue, blueprint_x, build_gamma, predict_growth_rate,
    predict_growth_rate_with_tol, top_singular_triple, GammaMatrix, SpectralResult, DEFAULT_TOL,
};
pub use variational::{
    f_eval, finite_diff_check, grad_log_f, lagrange_residual, partial_log_f, simplex_search,
    simplex_search_with, SearchOptions, SearchOutcome, UnitWeightMatrix,
};

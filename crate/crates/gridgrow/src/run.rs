//! Reproducible runs: configuration, report assembly, and exit codes for
//! the command-line front end.

use std::path::PathBuf;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::catalog::GrowthRateCatalog;
use crate::count::GridCounter;
use crate::error::{Error, Result};
use crate::grid::{parse_grid, GridMatrix};
use crate::gridding::{count_ungridded_with_caps, sample_gridded, BruteForceCaps};
use crate::report::{
    counts_to_csv, to_json, CountRecord, OptimizeReport, PredictReport, SampleReport,
    VerifyRecord, VerifyReport,
};
use crate::spectral::{
    blueprint_x, build_gamma, predict_growth_rate_with_tol, top_singular_triple, DEFAULT_TOL,
};
use crate::variational::{f_eval, lagrange_residual, simplex_search};

/// Default fraction band [lo·gr, hi·gr] the final count ratio must land in
/// for `verify` to pass.
pub const DEFAULT_BAND: (f64, f64) = (0.9, 1.0125);

pub const DEFAULT_SEARCH_DRAWS: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    /// Spectral growth-rate prediction.
    Predict,
    /// Exact gridded (and capped ungridded) counts for lengths 0..=n.
    Count,
    /// Sandwich and ratio-band checks; exit code 2 when any fails.
    Verify,
    /// Variational report: blueprint value, residual, search oracle.
    Optimize,
    /// One uniformly random gridded permutation at the argmax occupancy.
    Sample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub grid_path: PathBuf,
    /// Length bound; required by count, verify, and sample.
    pub n: Option<u64>,
    /// RNG seed; required by sample, defaulted by optimize.
    pub seed: Option<u64>,
    pub tol: f64,
    pub caps: BruteForceCaps,
    pub catalog_path: Option<PathBuf>,
    pub output: OutputFormat,
    /// Worker threads for count summands and search draws; 0 keeps the
    /// global default.
    pub threads: usize,
    /// Ratio band as fractions of the predicted growth rate.
    pub band: (f64, f64),
    /// Search-oracle draws for optimize.
    pub draws: u64,
}

impl RunConfig {
    pub fn new(command: Command, grid_path: impl Into<PathBuf>) -> Self {
        Self {
            command,
            grid_path: grid_path.into(),
            n: None,
            seed: None,
            tol: DEFAULT_TOL,
            caps: BruteForceCaps::default(),
            catalog_path: None,
            output: OutputFormat::Json,
            threads: 0,
            band: DEFAULT_BAND,
            draws: DEFAULT_SEARCH_DRAWS,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: String,
    pub exit_code: i32,
}

/// Maps an error to its process exit code: 64 usage, 65 unusable input
/// (parse, domain, or unresolvable cells), 69 resource caps, 70 internal.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Usage(_) => 64,
        Error::Parse { .. }
        | Error::Dimension(_)
        | Error::Domain(_)
        | Error::Io { .. }
        | Error::UnknownGrowthRate(_)
        | Error::FiniteClass(_)
        | Error::Uncountable { .. } => 65,
        Error::ResourceCap(_) => 69,
        _ => 70,
    }
}

/// Executes one configured command and renders its report.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    if config.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot build thread pool: {e}")))?;
        pool.install(|| run_inner(config))
    } else {
        run_inner(config)
    }
}

fn run_inner(config: &RunConfig) -> Result<RunOutput> {
    let text = std::fs::read_to_string(&config.grid_path).map_err(|source| Error::Io {
        path: config.grid_path.clone(),
        source,
    })?;
    let grid = parse_grid(&text)?;
    match config.command {
        Command::Predict => predict(config, &grid),
        Command::Count => count(config, &grid),
        Command::Verify => verify(config, &grid),
        Command::Optimize => optimize(config, &grid),
        Command::Sample => sample(config, &grid),
    }
}

fn load_catalog(config: &RunConfig) -> Result<GrowthRateCatalog> {
    let mut catalog = GrowthRateCatalog::builtin();
    if let Some(path) = &config.catalog_path {
        catalog.merge_file(path)?;
    }
    Ok(catalog)
}

fn require_n(config: &RunConfig) -> Result<u64> {
    config
        .n
        .ok_or_else(|| Error::Usage("this command needs --n <length>".into()))
}

fn ok(report: String) -> Result<RunOutput> {
    Ok(RunOutput {
        report,
        exit_code: 0,
    })
}

fn predict(config: &RunConfig, grid: &GridMatrix) -> Result<RunOutput> {
    let catalog = load_catalog(config)?;
    let (_, result, x) = predict_growth_rate_with_tol(grid, &catalog, config.tol)?;
    let report = PredictReport::new(&result, &x);
    ok(match config.output {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => report.to_csv(),
    })
}

fn count_records(config: &RunConfig, grid: &GridMatrix, n: u64) -> Result<Vec<CountRecord>> {
    let counter = GridCounter::new(grid, n)?;
    let mut records = Vec::with_capacity(n as usize + 1);
    for m in 0..=n {
        let gridded = counter.total(m)?;
        let ungridded = if m as usize <= config.caps.ungridded {
            Some(count_ungridded_with_caps(grid, m as usize, config.caps)?.to_string())
        } else {
            None
        };
        records.push(CountRecord {
            n: m,
            gridded: gridded.to_string(),
            ungridded,
        });
    }
    Ok(records)
}

fn count(config: &RunConfig, grid: &GridMatrix) -> Result<RunOutput> {
    let n = require_n(config)?;
    let records = count_records(config, grid, n)?;
    ok(match config.output {
        OutputFormat::Json => to_json(&records),
        OutputFormat::Csv => counts_to_csv(&records),
    })
}

fn verify(config: &RunConfig, grid: &GridMatrix) -> Result<RunOutput> {
    let n = require_n(config)?;
    let catalog = load_catalog(config)?;
    let gamma = build_gamma(grid, &catalog)?;
    let gr = top_singular_triple(&gamma, config.tol)?.gr;

    let raw = count_records(config, grid, n)?;
    let dims_exponent = (grid.cols() + grid.rows()) as u32;
    let mut records = Vec::with_capacity(raw.len());
    let mut sandwich_ok = true;
    let mut prev: Option<BigUint> = None;
    let mut final_ratio = None;
    for rec in raw {
        let gridded: BigUint = rec.gridded.parse().expect("decimal count");
        let sandwich = rec.ungridded.as_ref().map(|ung| {
            let ungridded: BigUint = ung.parse().expect("decimal count");
            let upper = BigUint::from(rec.n + 1).pow(dims_exponent) * &ungridded;
            ungridded <= gridded && gridded <= upper
        });
        if sandwich == Some(false) {
            sandwich_ok = false;
        }
        let ratio = prev.as_ref().and_then(|p| ratio_of(&gridded, p));
        if rec.n == n {
            final_ratio = ratio;
        }
        records.push(VerifyRecord {
            n: rec.n,
            gridded: rec.gridded,
            ungridded: rec.ungridded,
            sandwich_ok: sandwich,
            ratio,
        });
        prev = Some(gridded);
    }

    let band = [config.band.0 * gr, config.band.1 * gr];
    let ratio_ok = final_ratio.is_none_or(|r| band[0] <= r && r <= band[1]);
    let pass = sandwich_ok && ratio_ok;
    let report = VerifyReport {
        gr,
        records,
        sandwich_ok,
        final_ratio,
        band,
        ratio_ok,
        pass,
    };
    Ok(RunOutput {
        report: match config.output {
            OutputFormat::Json => to_json(&report),
            OutputFormat::Csv => report.to_csv(),
        },
        exit_code: if pass { 0 } else { 2 },
    })
}

fn ratio_of(current: &BigUint, prev: &BigUint) -> Option<f64> {
    use num_traits::Zero;
    if prev.is_zero() {
        return None;
    }
    // shifted integer division keeps 32 fractional bits of the quotient
    let scale = 1u64 << 32;
    let scaled = current * scale / prev;
    scaled.to_f64().map(|v| v / scale as f64)
}

fn optimize(config: &RunConfig, grid: &GridMatrix) -> Result<RunOutput> {
    let catalog = load_catalog(config)?;
    let gamma = build_gamma(grid, &catalog)?;
    let result = top_singular_triple(&gamma, config.tol)?;
    let x = blueprint_x(&gamma, &result)?;
    let f_blueprint = f_eval(&gamma, &x)?;
    let residual = lagrange_residual(&gamma, &x)?;
    let search = simplex_search(&gamma, config.draws, config.seed.unwrap_or(0))?;
    let report = OptimizeReport {
        s_squared: result.gr,
        f_blueprint,
        lagrange_residual: residual,
        search_best: search.f_best,
        search_gap: result.gr - search.f_best,
    };
    ok(match config.output {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => report.to_csv(),
    })
}

fn sample(config: &RunConfig, grid: &GridMatrix) -> Result<RunOutput> {
    let n = require_n(config)?;
    let seed = config
        .seed
        .ok_or_else(|| Error::Usage("sample needs --seed <integer>".into()))?;
    let counter = GridCounter::new(grid, n)?;
    let (argmax, _) = counter.argmax(n)?;
    let gridded = sample_gridded(grid, &argmax, seed)?;
    let report = SampleReport::new(&argmax, &gridded, seed);
    ok(match config.output {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => report.to_csv(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_grid(text: &str) -> tempfile_path::TempPath {
        tempfile_path::write_temp(text)
    }

    // minimal temp-file helper; tests only
    mod tempfile_path {
        use std::path::{Path, PathBuf};
        use std::sync::atomic::{AtomicU64, Ordering};

        pub struct TempPath(PathBuf);

        impl TempPath {
            pub fn path(&self) -> &Path {
                &self.0
            }
        }

        impl Drop for TempPath {
            fn drop(&mut self) {
                let _ = std::fs::remove_file(&self.0);
            }
        }

        static COUNTER: AtomicU64 = AtomicU64::new(0);

        pub fn write_temp(text: &str) -> TempPath {
            let id = COUNTER.fetch_add(1, Ordering::Relaxed);
            let path = std::env::temp_dir().join(format!(
                "gridgrow-test-{}-{id}.grid",
                std::process::id()
            ));
            std::fs::write(&path, text).expect("write temp grid");
            TempPath(path)
        }
    }

    #[test]
    fn predict_reports_skew_growth_rate() {
        let grid = write_grid("Av(12) Av(21)\nAv(21) Av(12)");
        let config = RunConfig::new(Command::Predict, grid.path());
        let out = run(&config).unwrap();
        assert_eq!(out.exit_code, 0);
        let v: serde_json::Value = serde_json::from_str(&out.report).unwrap();
        assert!((v["gr"].as_f64().unwrap() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn count_reports_powers_of_two() {
        let grid = write_grid("Av(21) Av(21)");
        let mut config = RunConfig::new(Command::Count, grid.path());
        config.n = Some(12);
        let out = run(&config).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.report).unwrap();
        assert_eq!(v[12]["gridded"].as_str().unwrap(), "4096");
        assert_eq!(v[3]["ungridded"].as_str().unwrap(), "5");
        assert!(v[12]["ungridded"].is_null());
    }

    #[test]
    fn verify_passes_on_skew_at_7() {
        let grid = write_grid("Av(12) Av(21)\nAv(21) Av(12)");
        let mut config = RunConfig::new(Command::Verify, grid.path());
        config.n = Some(7);
        let out = run(&config).unwrap();
        assert_eq!(out.exit_code, 0, "report: {}", out.report);
        let v: serde_json::Value = serde_json::from_str(&out.report).unwrap();
        assert_eq!(v["pass"].as_bool(), Some(true));
        assert!((v["final_ratio"].as_f64().unwrap() - 3.640535372848948).abs() < 1e-9);
    }

    #[test]
    fn verify_fails_outside_band() {
        let grid = write_grid("Av(12) Av(21)\nAv(21) Av(12)");
        let mut config = RunConfig::new(Command::Verify, grid.path());
        config.n = Some(7);
        config.band = (0.99, 1.01); // ratio at 7 is still far below gr
        let out = run(&config).unwrap();
        assert_eq!(out.exit_code, 2);
    }

    #[test]
    fn missing_arguments_are_usage_errors() {
        let grid = write_grid("Av(21)");
        let config = RunConfig::new(Command::Count, grid.path());
        let err = run(&config).unwrap_err();
        assert_eq!(exit_code_for(&err), 64);
        let mut config = RunConfig::new(Command::Sample, grid.path());
        config.n = Some(4);
        let err = run(&config).unwrap_err();
        assert_eq!(exit_code_for(&err), 64);
    }

    #[test]
    fn exit_codes_for_file_problems() {
        let config = RunConfig::new(Command::Predict, "/nonexistent/foo.grid");
        assert_eq!(exit_code_for(&run(&config).unwrap_err()), 65);
        let grid = write_grid("wat");
        let config = RunConfig::new(Command::Predict, grid.path());
        assert_eq!(exit_code_for(&run(&config).unwrap_err()), 65);
    }

    #[test]
    fn sample_is_deterministic_and_valid() {
        let grid = write_grid("Av(12) Av(21)\nAv(21) Av(12)");
        let mut config = RunConfig::new(Command::Sample, grid.path());
        config.n = Some(6);
        config.seed = Some(99);
        let a = run(&config).unwrap();
        let b = run(&config).unwrap();
        assert_eq!(a.report, b.report);
        let v: serde_json::Value = serde_json::from_str(&a.report).unwrap();
        assert_eq!(v["perm"].as_array().unwrap().len(), 6);
    }

    #[test]
    fn optimize_report_is_consistent() {
        let grid = write_grid("Av(321) .\nAv(12) Av(12)");
        let mut config = RunConfig::new(Command::Optimize, grid.path());
        config.draws = 3000;
        config.seed = Some(1);
        let out = run(&config).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.report).unwrap();
        let s2 = v["s_squared"].as_f64().unwrap();
        assert!((s2 - 5.23606797749979).abs() < 1e-9);
        assert!((v["f_blueprint"].as_f64().unwrap() - s2).abs() < 1e-9);
        assert!(v["search_best"].as_f64().unwrap() <= s2 + 1e-6);
    }

    #[test]
    fn csv_output_has_per_n_rows() {
        let grid = write_grid("Av(21) Av(21)");
        let mut config = RunConfig::new(Command::Count, grid.path());
        config.n = Some(3);
        config.output = OutputFormat::Csv;
        let out = run(&config).unwrap();
        let lines: Vec<&str> = out.report.lines().collect();
        assert_eq!(lines[0], "n,gridded,ungridded");
        assert_eq!(lines[4], "3,8,5");
    }
}

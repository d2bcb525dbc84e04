//! Thin command-line front end over the library pipeline.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use gridgrow::gridding::BruteForceCaps;
use gridgrow::run::{self, Command, OutputFormat, RunConfig, DEFAULT_SEARCH_DRAWS};
use gridgrow::spectral::DEFAULT_TOL;

/// Environment variable overriding both brute-force length caps.
const CAP_ENV: &str = "GRIDGROW_CAP_N";

#[derive(Parser)]
#[command(
    name = "gridgrow",
    about = "Growth rates of permutation grid classes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Args)]
struct Common {
    /// Grid-spec file (rows top-to-bottom; tokens ., inc, dec, Av(...), gr=R)
    grid: PathBuf,

    /// Catalog file of `Av(...) = <real>` growth rates, merged over built-ins
    #[arg(long)]
    catalog: Option<PathBuf>,

    /// Report format
    #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
    output: String,

    /// Power-iteration convergence tolerance
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Worker threads for count summands and search draws (0 = default pool)
    #[arg(long, default_value_t = 0)]
    threads: usize,

    /// Brute-force length cap (membership and ungridded counting)
    #[arg(long)]
    cap_n: Option<usize>,
}

#[derive(Subcommand)]
enum Commands {
    /// Predict the growth rate of a grid class spectrally
    Predict {
        #[command(flatten)]
        common: Common,
    },
    /// Exact gridded (and capped ungridded) counts for lengths 0..=n
    Count {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: u64,
    },
    /// Check sandwich bounds and ratio convergence; exit 2 on failure
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: u64,
        /// Lower band edge as a fraction of the predicted rate
        #[arg(long, default_value_t = run::DEFAULT_BAND.0)]
        band_lo: f64,
        /// Upper band edge as a fraction of the predicted rate
        #[arg(long, default_value_t = run::DEFAULT_BAND.1)]
        band_hi: f64,
    },
    /// Variational report: blueprint value, Lagrange residual, search oracle
    Optimize {
        #[command(flatten)]
        common: Common,
        /// Random draws for the search oracle
        #[arg(long, default_value_t = DEFAULT_SEARCH_DRAWS)]
        draws: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample one gridded permutation from the argmax occupancy of weight n
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        seed: u64,
    },
}

fn caps_from(common: &Common) -> Result<BruteForceCaps, String> {
    let mut caps = BruteForceCaps::default();
    if let Ok(value) = std::env::var(CAP_ENV) {
        let parsed: usize = value
            .parse()
            .map_err(|_| format!("{CAP_ENV}={value:?} is not a length"))?;
        caps.membership = parsed;
        caps.ungridded = parsed;
    }
    if let Some(cap) = common.cap_n {
        caps.membership = cap;
        caps.ungridded = cap;
    }
    Ok(caps)
}

fn config_from(cli: Cli) -> Result<RunConfig, String> {
    let (command, common) = match &cli.command {
        Commands::Predict { common } => (Command::Predict, common),
        Commands::Count { common, .. } => (Command::Count, common),
        Commands::Verify { common, .. } => (Command::Verify, common),
        Commands::Optimize { common, .. } => (Command::Optimize, common),
        Commands::Sample { common, .. } => (Command::Sample, common),
    };
    let mut config = RunConfig::new(command, &common.grid);
    config.catalog_path = common.catalog.clone();
    config.output = match common.output.as_str() {
        "csv" => OutputFormat::Csv,
        _ => OutputFormat::Json,
    };
    config.tol = common.tol;
    config.threads = common.threads;
    config.caps = caps_from(common)?;
    match cli.command {
        Commands::Predict { .. } => {}
        Commands::Count { n, .. } => config.n = Some(n),
        Commands::Verify {
            n,
            band_lo,
            band_hi,
            ..
        } => {
            config.n = Some(n);
            config.band = (band_lo, band_hi);
        }
        Commands::Optimize { draws, seed, .. } => {
            config.draws = draws;
            config.seed = Some(seed);
        }
        Commands::Sample { n, seed, .. } => {
            config.n = Some(n);
            config.seed = Some(seed);
        }
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let config = match config_from(cli) {
        Ok(config) => config,
        Err(message) => {
            eprintln!("usage error: {message}");
            return ExitCode::from(64);
        }
    };
    match run::run(&config) {
        Ok(output) => {
            println!("{}", output.report);
            ExitCode::from(output.exit_code as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(run::exit_code_for(&err) as u8)
        }
    }
}

//! Command-line front end for the experiment harness.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use irs2d::harness::{run_experiment, ExperimentConfig};
use irs2d::Error;

#[derive(Parser)]
#[command(
    name = "irs2d",
    about = "Two-dimensional channel parameter estimation experiments for IRS-assisted MIMO links",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// RMSE of the six spatial frequencies vs SNR, with CRLB reference curves
    Rmse(RunArgs),
    /// Normalized reconstruction error of the cascaded channel
    Nmse(RunArgs),
    /// Beamformed spectral efficiency with estimated precoder/combiner/phases
    Se(RunArgs),
    /// Analytic complexity table over IRS sizes
    Complexity(RunArgs),
    /// All of the above
    All(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file; flags below override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo trials per sweep point
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated SNR grid in dB
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    snr: Option<Vec<f64>>,
    /// Comma-separated IRS element counts for N sweeps
    #[arg(long, value_delimiter = ',')]
    irs_sizes: Option<Vec<usize>>,
    /// Comma-separated methods (HKMR, TSHDR, LS, KRF, HDR)
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Output directory for CSV files
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a matplotlib plot script next to the CSVs
    #[arg(long)]
    plot_script: bool,
    /// Use physically unit-modulus IRS phase vectors (receive filters
    /// rescale to compensate)
    #[arg(long)]
    unit_modulus_irs: bool,
}

fn build_config(args: &RunArgs, metrics: Vec<String>) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.metrics = metrics;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if let Some(snr) = &args.snr {
        cfg.snr_db = snr.clone();
    }
    if let Some(sizes) = &args.irs_sizes {
        cfg.irs_sizes = sizes.clone();
    }
    if let Some(methods) = &args.methods {
        cfg.methods = methods.clone();
    }
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    if args.plot_script {
        cfg.plot_script = true;
    }
    if args.unit_modulus_irs {
        cfg.unit_modulus_irs = true;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Error> {
    let (args, metrics) = match &cli.command {
        Command::Rmse(a) => (a, vec!["rmse".to_string()]),
        Command::Nmse(a) => (a, vec!["nmse".to_string()]),
        Command::Se(a) => (a, vec!["se".to_string()]),
        Command::Complexity(a) => (a, vec!["complexity".to_string()]),
        Command::All(a) => (
            a,
            vec![
                "rmse".to_string(),
                "nmse".to_string(),
                "se".to_string(),
                "complexity".to_string(),
            ],
        ),
    };
    let cfg = build_config(args, metrics)?;
    let records = run_experiment(&cfg)?;
    eprintln!(
        "wrote {} records to {}",
        records.len(),
        cfg.out_dir.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Config(_)) => {
            eprintln!("config error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

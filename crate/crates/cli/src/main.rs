use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use expnn_cli::config::{parse_interval, parse_scales};
use expnn_cli::{configure_threads, output, run_experiment, CliError, ExperimentConfig};

/// Approximation sweeps for exponential-sampling neural network operators.
#[derive(Debug, Parser)]
#[command(name = "expnn", version)]
struct Args {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sigmoid: tanh, logistic, bspline1, bspline2.
    #[arg(long)]
    kernel: Option<String>,
    /// Operator family: E_n, Q_n, E_n_multivariate, S_w.
    #[arg(long)]
    operator: Option<String>,
    /// Registered test function.
    #[arg(long)]
    function: Option<String>,
    /// Working interval `a,b`.
    #[arg(long, allow_hyphen_values = true)]
    interval: Option<String>,
    /// Comma-separated scales.
    #[arg(long)]
    scales: Option<String>,
    #[arg(long)]
    nu: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// List registered functions and exit.
    #[arg(long)]
    list_functions: bool,
}

fn build_config(args: &Args) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(k) = &args.kernel {
        cfg.kernel_name = k.clone();
    }
    if let Some(o) = &args.operator {
        cfg.operator_family = o.clone();
    }
    if let Some(f) = &args.function {
        cfg.function_name = f.clone();
    }
    if let Some(i) = &args.interval {
        cfg.interval = Some(parse_interval(i)?);
    }
    if let Some(s) = &args.scales {
        cfg.scales = parse_scales(s)?;
    }
    if let Some(nu) = args.nu {
        cfg.nu = nu;
    }
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    Ok(cfg)
}

fn run(args: &Args) -> Result<bool, CliError> {
    configure_threads()?;
    if args.list_functions {
        for name in expnn::registry::list() {
            println!("{name}");
        }
        return Ok(true);
    }
    let cfg = build_config(args)?;
    let result = run_experiment(&cfg)?;
    print!("{}", output::summary(&result));
    Ok(result.all_satisfied())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

//! Experiment runner for exponential-sampling neural network operators.

pub mod config;
pub mod error;
pub mod experiment;
pub mod output;

pub use config::ExperimentConfig;
pub use error::{CliError, Result};
pub use experiment::{run_experiment, sweep, SweepResult, SweepRow};
pub use output::emit_csv;

/// Sizes the global rayon pool from `EXPNN_THREADS` (unset or 0 = automatic).
pub fn configure_threads() -> Result<()> {
    let threads = match std::env::var("EXPNN_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Config(format!("EXPNN_THREADS must be a count, got `{v}`")))?,
        Err(_) => 0,
    };
    if threads > 0 {
        // A pool built earlier in the process wins; that is fine here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    Ok(())
}

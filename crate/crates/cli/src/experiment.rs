//! Scale sweeps: error measurement, bound checks and rate fitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use expnn::analysis::bounds::{
    theorem3_report, theorem4_report, theorem6_report, BoundOptions, BoundReport, Theorem,
};
use expnn::analysis::measure::{bounded_error_at, ErrorProfile};
use expnn::analysis::rate::{fit_rate, RateFit};
use expnn::density::DEFAULT_TRUNCATION_TOL;
use expnn::{
    log_grid, registry, ConditionReport, DensityKernel, FunctionHandle, MultiFunctionHandle,
    MultivariateOperator, OperatorFamily, SamplingOperator,
};

use crate::config::{ExperimentConfig, MAX_AXIS_POINTS};
use crate::error::{CliError, Result};
use crate::output;

/// One scale of a sweep. Bounds are `None` when they do not apply.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n: u32,
    pub sup_error: f64,
    pub mean_error: f64,
    pub bound_t3: Option<f64>,
    pub bound_t4: Option<f64>,
    pub bound_t6: Option<f64>,
    pub satisfied: bool,
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub config: ExperimentConfig,
    pub rows: Vec<SweepRow>,
    pub reports: Vec<BoundReport<f64>>,
    /// Log-log fit of sup error against `n`; absent with fewer than four
    /// usable scales or when every error vanishes.
    pub rate: Option<RateFit<f64>>,
    pub condition_report: ConditionReport<f64>,
}

impl SweepResult {
    pub fn all_satisfied(&self) -> bool {
        self.rows.iter().all(|r| r.satisfied)
    }
}

/// Evaluation points: `grid_points` log-uniform points of `[a, b]` plus the
/// seeded random extras, sorted.
pub fn evaluation_points(cfg: &ExperimentConfig, a: f64, b: f64) -> Vec<f64> {
    let mut points = log_grid(a, b, cfg.grid_points);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (la, lb) = (a.ln(), b.ln());
    points.extend((0..cfg.random_points).map(|_| rng.gen_range(la..=lb).exp().clamp(a, b)));
    points.sort_by(f64::total_cmp);
    points
}

struct Setup {
    kernel: DensityKernel<f64>,
    family: OperatorFamily,
    f: FunctionHandle<f64>,
    opts: BoundOptions<f64>,
    truncation: usize,
    points: Vec<f64>,
}

fn setup(cfg: &ExperimentConfig) -> Result<Setup> {
    cfg.validate()?;
    let family = cfg.family()?;
    let kernel = DensityKernel::by_name(&cfg.kernel_name)?;
    let entry = registry::get::<f64>(&cfg.function_name)?;
    let (a, b) = cfg.interval.unwrap_or_else(|| entry.handle.domain());
    let f = entry.handle.on_domain(a, b)?;
    let truncation = cfg
        .truncation_k
        .unwrap_or_else(|| kernel.default_truncation(DEFAULT_TRUNCATION_TOL));
    let opts = BoundOptions {
        quasi_window: (a, b),
        truncation: Some(truncation),
        ..BoundOptions::default()
    };
    let points = evaluation_points(cfg, a, b);
    Ok(Setup {
        kernel,
        family,
        f,
        opts,
        truncation,
        points,
    })
}

fn not_applicable(e: &expnn::Error) -> bool {
    matches!(
        e,
        expnn::Error::Precondition(_) | expnn::Error::UnsupportedKernel(_)
    )
}

fn optional(r: expnn::Result<BoundReport<f64>>) -> Result<Option<BoundReport<f64>>> {
    match r {
        Ok(r) => Ok(Some(r)),
        Err(e) if not_applicable(&e) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn measure(s: &Setup, cfg: &ExperimentConfig, n: u32) -> Result<ErrorProfile<f64>> {
    let profile = match s.family {
        OperatorFamily::Bounded => bounded_error_at(&s.kernel, &s.f, n, s.points.clone())?,
        OperatorFamily::Quasi | OperatorFamily::Sampling => {
            let op =
                SamplingOperator::new(&s.kernel, &s.f, f64::from(n), s.truncation, s.f.domain())?;
            let values = op.eval_many(&s.points)?;
            let errors = s
                .points
                .iter()
                .zip(values)
                .map(|(&x, v)| (v.value - s.f.eval(x)).abs())
                .collect();
            ErrorProfile::from_errors(s.points.clone(), errors)
        }
        OperatorFamily::Multivariate => {
            let g = MultiFunctionHandle::product(&s.f, cfg.dimension)?;
            let op = MultivariateOperator::new(&s.kernel, &g, n)?;
            let (a, b) = s.f.domain();
            let axis = log_grid(a, b, cfg.grid_points.min(MAX_AXIS_POINTS));
            let points = box_points(&axis, cfg.dimension);
            let values = op.eval_many(&points)?;
            let errors = points
                .iter()
                .zip(values)
                .map(|(x, v)| (v - g.eval(x)).abs())
                .collect();
            ErrorProfile::from_errors(Vec::new(), errors)
        }
    };
    Ok(profile)
}

/// All points of `axis^dim`, last coordinate fastest.
fn box_points(axis: &[f64], dim: usize) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::with_capacity(dim)];
    for _ in 0..dim {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    points
}

fn sweep_row(
    s: &Setup,
    cfg: &ExperimentConfig,
    n: u32,
) -> Result<(SweepRow, Vec<BoundReport<f64>>)> {
    let profile = measure(s, cfg, n)?;
    let mut reports = Vec::new();
    if s.kernel.is_tanh() {
        match s.family {
            OperatorFamily::Bounded => {
                reports.extend(optional(theorem3_report(
                    &s.f,
                    n,
                    cfg.nu,
                    profile.sup,
                    &s.opts,
                ))?);
                reports.extend(optional(theorem4_report(
                    &s.f,
                    n,
                    cfg.nu,
                    profile.sup,
                    &s.opts,
                ))?);
            }
            OperatorFamily::Quasi | OperatorFamily::Sampling if s.f.global_sup().is_some() => {
                reports.extend(optional(theorem6_report(
                    &s.f,
                    n,
                    cfg.nu,
                    profile.sup,
                    &s.opts,
                ))?);
            }
            _ => {}
        }
    }
    let bound = |t: Theorem| reports.iter().find(|r| r.theorem == t).map(|r| r.bound);
    let row = SweepRow {
        n,
        sup_error: profile.sup,
        mean_error: profile.mean,
        bound_t3: bound(Theorem::T3),
        bound_t4: bound(Theorem::T4),
        bound_t6: bound(Theorem::T6),
        satisfied: reports.iter().all(|r| r.satisfied),
    };
    Ok((row, reports))
}

/// Runs the sweep in memory without writing files.
pub fn sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let s = setup(cfg)?;
    let per_scale = cfg
        .scales
        .par_iter()
        .map(|&n| sweep_row(&s, cfg, n))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(per_scale.len());
    let mut reports = Vec::new();
    for (row, r) in per_scale {
        rows.push(row);
        reports.extend(r);
    }
    let data: Vec<(f64, f64)> = rows.iter().map(|r| (f64::from(r.n), r.sup_error)).collect();
    let rate = fit_rate(&data).ok();
    let condition_report = s
        .kernel
        .sigmoid()
        .check_conditions(10.0, 1000)
        .map_err(|e| CliError::Other(e.to_string()))?;
    Ok(SweepResult {
        config: cfg.clone(),
        rows,
        reports,
        rate,
        condition_report,
    })
}

/// Runs the sweep and writes `results.csv`, `bounds.csv`, `plot.gp` and
/// `summary.txt` into the configured output directory.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let result = sweep(cfg)?;
    output::write_all(&result, &cfg.output_dir)?;
    Ok(result)
}

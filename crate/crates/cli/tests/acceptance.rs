//! Acceptance sweep. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion failed.

use std::f64::consts::E;
use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use expnn::analysis::bounds::{
    bound_theorem2, bound_theorem3, bound_theorem4, bound_theorem6, theorem3_bound,
    theorem3_report, theorem4_bound, theorem6_bound, BoundOptions, TANH_INV_CHI_E, TANH_TAIL,
};
use expnn::analysis::measure::bounded_error;
use expnn::analysis::mellin::{mellin_derivative, stencil_interior};
use expnn::analysis::rate::fit_rate;
use expnn::operators::{classical_eval, quasi_eval};
use expnn::{
    log_grid, nn_eval, registry, BoundedOperator, Config, Kernel, MultiFunction,
    MultivariateOperator, QuasiOperator, SamplingOperator,
};
use expnn_cli::{run_experiment, ExperimentConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

const SCALES: [u32; 5] = [10, 30, 100, 300, 1000];
const NUS: [f64; 3] = [0.3, 0.5, 0.8];

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn partition_of_unity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20261019);
    let us: Vec<f64> = (0..100)
        .map(|_| rng.gen_range(0.1f64.ln()..10f64.ln()).exp())
        .collect();
    let mut worst = 0.0f64;
    for kernel in [Kernel::tanh(), Kernel::logistic()] {
        for &u in &us {
            worst = worst.max((kernel.partition_sum(u, 50).map_err(err)? - 1.0).abs());
        }
    }
    let elapsed = start.elapsed();
    check(
        worst < 1e-10 && elapsed < Duration::from_secs(1),
        format!("max |sum - 1| = {worst:.2e} in {elapsed:.2?}"),
    )
}

fn kernel_closed_form() -> Outcome {
    let kernel = Kernel::tanh();
    let mut worst = 0.0f64;
    for x in log_grid(0.01, 100.0, 2001) {
        let closed = kernel
            .closed_form(x)
            .ok_or("tanh kernel has no closed form")?;
        worst = worst.max((kernel.eval_definitional(x) - closed).abs());
    }
    let chi_e = kernel.eval_x(E).map_err(err)?;
    let quarter_tanh2 = 0.25 * 2f64.tanh();
    check(
        worst < 1e-12
            && (chi_e - 0.2410068950).abs() < 1e-9
            && (chi_e - quarter_tanh2).abs() < 1e-15
            && (1.0 / chi_e - TANH_INV_CHI_E).abs() < 1e-4,
        format!(
            "max deviation {worst:.2e}, chi(e) = {chi_e:.12}, 1/chi(e) = {:.6}",
            1.0 / chi_e
        ),
    )
}

fn denominator_floor() -> Outcome {
    let kernel = Kernel::tanh();
    let floor = kernel.value_at_e();
    let mut least = f64::INFINITY;
    for n in [1, 2, 5, 10, 50, 200] {
        for x in log_grid(1.0, E * E, 501) {
            least = least.min(kernel.denominator_sum(x, n, 1.0, E * E).map_err(err)?);
        }
    }
    check(
        least >= floor - 1e-12,
        format!("min denominator {least:.12} vs chi(e) = {floor:.12}"),
    )
}

fn tail_constant() -> Outcome {
    let start = Instant::now();
    let kernel = Kernel::tanh();
    let us = log_grid(1.0, E, 101);
    let mut worst_ratio = 0.0f64;
    for n in [10u32, 50, 100, 500, 1000] {
        for nu in NUS {
            let n = f64::from(n);
            let threshold = n.powf(1.0 - nu);
            let bound = TANH_TAIL * n.powf(nu - 1.0);
            for &u in &us {
                let mass = kernel.tail_mass(u, threshold, 50).map_err(err)?;
                worst_ratio = worst_ratio.max(mass / bound);
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        worst_ratio <= 1.0 && elapsed < Duration::from_secs(5),
        format!("max tail / bound = {worst_ratio:.3e} in {elapsed:.2?}"),
    )
}

fn uniform_convergence() -> Outcome {
    let kernel = Kernel::tanh();
    let f = registry::get::<f64>("sinlog").map_err(err)?.handle;
    let errors = SCALES
        .iter()
        .map(|&n| bounded_error(&kernel, &f, n, 501).map(|p| p.sup))
        .collect::<expnn::Result<Vec<f64>>>()
        .map_err(err)?;
    let monotone = errors.windows(2).all(|w| w[1] <= 1.1 * w[0]);
    let ratio = errors[4] / errors[0];
    check(
        ratio < 0.1 && monotone,
        format!(
            "errors [{}], err(1000)/err(10) = {ratio:.3e}",
            errors
                .iter()
                .map(|e| format!("{e:.3e}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    )
}

fn continuous_entries() -> Vec<expnn::Entry> {
    registry::list()
        .into_iter()
        .map(|name| registry::get::<f64>(name).unwrap())
        .filter(|e| e.handle.tags().continuous)
        .collect()
}

fn theorem3_domination() -> Outcome {
    let kernel = Kernel::tanh();
    let opts = BoundOptions::default();
    let mut checks = 0;
    let mut tightest = 0.0f64;
    for entry in continuous_entries() {
        for n in SCALES {
            let measured = bounded_error(&kernel, &entry.handle, n, opts.eval_grid)
                .map_err(err)?
                .sup;
            for nu in NUS {
                let r = theorem3_report(&entry.handle, n, nu, measured, &opts).map_err(err)?;
                if !r.satisfied {
                    return Err(format!(
                        "{} n = {n} nu = {nu}: {:.3e} > {:.3e}",
                        entry.name(),
                        measured,
                        r.bound
                    ));
                }
                tightest = tightest.max(measured / r.bound);
                checks += 1;
            }
        }
    }
    // the one-call entry point measures the same way
    let sinlog = registry::get::<f64>("sinlog").map_err(err)?.handle;
    let direct = bound_theorem3(&sinlog, &kernel, 100, 0.5, &opts).map_err(err)?;
    check(
        direct.satisfied,
        format!("{checks} checks, max error / bound = {tightest:.3e}"),
    )
}

fn theorem4_domination() -> Outcome {
    let kernel = Kernel::tanh();
    let opts = BoundOptions::default();
    let mut checks = 0;
    for entry in continuous_entries()
        .into_iter()
        .filter(|e| e.handle.tags().c2)
    {
        for n in SCALES {
            for nu in NUS {
                let r = bound_theorem4(&entry.handle, &kernel, n, nu, &opts).map_err(err)?;
                if !r.satisfied {
                    return Err(format!(
                        "{} n = {n} nu = {nu}: {:.3e} > {:.3e}",
                        entry.name(),
                        r.measured_sup_error,
                        r.bound
                    ));
                }
                checks += 1;
            }
        }
    }
    let logx = registry::get::<f64>("logx").map_err(err)?;
    let (a, b) = logx.handle.domain();
    let mut worst = 0.0f64;
    for n in SCALES {
        for nu in NUS {
            let inputs = logx
                .analytic_theorem4_inputs(n, nu, opts.norm_grid, 1.0)
                .ok_or("logx has no closed-form Mellin derivatives")?
                .map_err(err)?;
            let nf = f64::from(n);
            let closed = TANH_INV_CHI_E * (nf.powf(-nu) + (b - a) * TANH_TAIL * nf.powf(nu - 1.0));
            worst = worst.max((theorem4_bound(&inputs, n, nu) - closed).abs());
        }
    }
    check(
        worst < 1e-10,
        format!("{checks} checks, logx closed-form deviation {worst:.2e}"),
    )
}

fn quasi_interpolation() -> Outcome {
    let kernel = Kernel::tanh();
    let opts = BoundOptions::default();
    let mut tightest = 0.0f64;
    for name in ["runge_log", "sinlog"] {
        let f = registry::get::<f64>(name).map_err(err)?.handle;
        for n in [10, 100, 1000] {
            for nu in NUS {
                let r = bound_theorem6(&f, &kernel, n, nu, &opts).map_err(err)?;
                if !r.satisfied {
                    return Err(format!(
                        "{name} n = {n} nu = {nu}: {:.3e} > {:.3e}",
                        r.measured_sup_error, r.bound
                    ));
                }
                tightest = tightest.max(r.measured_sup_error / r.bound);
            }
        }
    }
    let mut exact = true;
    for (omega, norm) in [(0.0, 1.0), (0.3, 3.0), (1e-4, 5.0)] {
        for n in SCALES {
            for nu in NUS {
                exact &= theorem3_bound(omega, norm, n, nu)
                    == TANH_INV_CHI_E * theorem6_bound(omega, norm, n, nu);
            }
        }
    }
    check(
        exact,
        format!("max error / bound = {tightest:.3e}, T3 = 4.14925 x T6 exactly: {exact}"),
    )
}

fn holder_rate() -> Outcome {
    let kernel = Kernel::tanh();
    let opts = BoundOptions::default();
    let scales = [10u32, 30, 100, 300, 1000, 3000];
    let mut slopes = Vec::new();
    for name in ["sqrtlog_holder", "logx"] {
        let f = registry::get::<f64>(name).map_err(err)?.handle;
        let mut data = Vec::new();
        for n in scales {
            let r = bound_theorem2(&f, &kernel, n, &opts).map_err(err)?;
            if !r.satisfied {
                return Err(format!(
                    "{name} n = {n}: {:.3e} exceeds the Hölder bound {:.3e}",
                    r.measured_sup_error, r.bound
                ));
            }
            data.push((f64::from(n), r.measured_sup_error));
        }
        slopes.push(fit_rate(&data).map_err(err)?.slope);
    }
    check(
        slopes[0] <= -0.4 && slopes[1] <= -0.5,
        format!(
            "slope sqrtlog_holder = {:.4}, logx = {:.4}",
            slopes[0], slopes[1]
        ),
    )
}

fn multivariate() -> Outcome {
    let kernel = Kernel::tanh();
    let square = vec![(1.0, E * E); 2];
    let constant = MultiFunction::new("c", square.clone(), |_| 2.5).map_err(err)?;
    let axis = log_grid(1.0, E * E, 21);
    let mut const_dev = 0.0f64;
    for n in [1, 7, 50] {
        let op = MultivariateOperator::new(&kernel, &constant, n).map_err(err)?;
        for &x in &axis {
            for &y in &axis {
                const_dev = const_dev.max((op.eval(&[x, y]).map_err(err)? - 2.5).abs());
            }
        }
    }

    let sinlog = registry::get::<f64>("sinlog").map_err(err)?.handle;
    let line = MultiFunction::product(&sinlog, 1).map_err(err)?;
    let mut line_dev = 0.0f64;
    for n in [3, 40] {
        let multi = MultivariateOperator::new(&kernel, &line, n).map_err(err)?;
        let uni = BoundedOperator::new(&kernel, &sinlog, n).map_err(err)?;
        for &x in &axis {
            line_dev =
                line_dev.max((multi.eval(&[x]).map_err(err)? - uni.eval(x).map_err(err)?).abs());
        }
    }

    let product =
        MultiFunction::new("logx1*logx2", square, |x| x[0].ln() * x[1].ln()).map_err(err)?;
    let sup_err = |n: u32| -> Result<f64, String> {
        let op = MultivariateOperator::new(&kernel, &product, n).map_err(err)?;
        let mut worst = 0.0f64;
        for &x in &axis {
            for &y in &axis {
                worst = worst.max((op.eval(&[x, y]).map_err(err)? - x.ln() * y.ln()).abs());
            }
        }
        Ok(worst)
    };
    let (e20, e200) = (sup_err(20)?, sup_err(200)?);
    check(
        const_dev < 1e-13 && line_dev < 1e-14 && e200 < e20,
        format!("constant {const_dev:.2e}, N=1 vs univariate {line_dev:.2e}, error n=20 {e20:.3e} -> n=200 {e200:.3e}"),
    )
}

/// Double-double accumulator.
#[derive(Default)]
struct TwoSum {
    hi: f64,
    lo: f64,
}

impl TwoSum {
    fn add(&mut self, x: f64) {
        let s = self.hi + x;
        let bp = s - self.hi;
        let err = (self.hi - (s - bp)) + (x - bp);
        self.hi = s;
        self.lo += err;
    }

    fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// `E_n(f, x)` for `[a, b] = [1, e²]` straight from the definitions:
/// `σ = (tanh + 1)/2`, nodes `k = 0..=2n`.
fn oracle_bounded(f: fn(f64) -> f64, n: u32, x: f64) -> f64 {
    let sigma = |t: f64| 0.5 * (t.tanh() + 1.0);
    let chi = |y: f64| 0.5 * (sigma(y.ln() + 1.0) - sigma(y.ln() - 1.0));
    let (mut num, mut den) = (TwoSum::default(), TwoSum::default());
    for k in 0..=(2 * n as i64) {
        let w = chi((-(k as f64)).exp() * x.powi(n as i32));
        num.add(f((k as f64 / n as f64).exp()) * w);
        den.add(w);
    }
    num.value() / den.value()
}

fn oracle_equivalence() -> Outcome {
    let kernel = Kernel::tanh();
    let runge = registry::get::<f64>("runge_log").map_err(err)?.handle;
    let mut series_dev = 0.0f64;
    for n in [10u32, 100, 1000] {
        let q = Config::quasi(kernel.clone(), n, Some(50));
        let s = Config::sampling(kernel.clone(), f64::from(n), Some(50));
        let prepared_q = QuasiOperator::new(&kernel, &runge, n, 50, (0.5, 2.0)).map_err(err)?;
        let prepared_s =
            SamplingOperator::new(&kernel, &runge, f64::from(n), 50, (0.5, 2.0)).map_err(err)?;
        for x in log_grid(0.5, 2.0, 101) {
            let a = quasi_eval(&q, &runge, x).map_err(err)?.value;
            let b = classical_eval(&s, &runge, x).map_err(err)?.value;
            let c = prepared_q.eval(x).map_err(err)?.value;
            let d = prepared_s.eval(x).map_err(err)?.value;
            series_dev = series_dev
                .max((a - b).abs())
                .max((c - d).abs())
                .max((a - c).abs());
        }
    }

    fn sinlog(x: f64) -> f64 {
        x.ln().sin() + 2.0
    }
    let f = registry::get::<f64>("sinlog").map_err(err)?.handle;
    let mut oracle_dev = 0.0f64;
    for n in [1u32, 2, 3, 5, 10] {
        let cfg = Config::bounded(kernel.clone(), n);
        for x in log_grid(1.0, E * E, 97) {
            oracle_dev = oracle_dev
                .max((nn_eval(&cfg, &f, x).map_err(err)? - oracle_bounded(sinlog, n, x)).abs());
        }
    }
    check(
        series_dev < 1e-14 && oracle_dev < 1e-12,
        format!("Q_n vs S_w {series_dev:.2e}, E_n vs direct oracle {oracle_dev:.2e}"),
    )
}

fn mellin_derivatives() -> Outcome {
    let mut worst = 0.0f64;
    for name in ["logx", "sq_log", "sinlog"] {
        let entry = registry::get::<f64>(name).map_err(err)?;
        for order in [1u32, 2] {
            let (lo, hi) = stencil_interior(&entry.handle, order);
            for x in log_grid(lo, hi, 100) {
                let exact = if order == 1 {
                    entry.theta1(x)
                } else {
                    entry.theta2(x)
                }
                .ok_or("missing closed form")?;
                let fd = mellin_derivative(&entry.handle, x, order)
                    .map_err(err)?
                    .value;
                worst = worst.max((fd - exact).abs());
            }
        }
    }
    check(worst < 1e-6, format!("max |fd - exact| = {worst:.2e}"))
}

fn cli_reproducibility(suite_start: Instant) -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let run = |sub: &str, cfg: &ExperimentConfig| -> Result<(Vec<u8>, bool), String> {
        let cfg = ExperimentConfig {
            output_dir: dir.path().join(sub),
            ..cfg.clone()
        };
        let result = run_experiment(&cfg).map_err(err)?;
        let bytes = fs::read(cfg.output_dir.join("results.csv")).map_err(err)?;
        Ok((bytes, result.all_satisfied()))
    };
    let sinlog = ExperimentConfig {
        function_name: "sinlog".into(),
        random_points: 64,
        seed: 11,
        ..ExperimentConfig::default()
    };
    let runge = ExperimentConfig {
        operator_family: "Q_n".into(),
        function_name: "runge_log".into(),
        interval: Some((0.5, 2.0)),
        scales: vec![10, 100, 1000],
        ..ExperimentConfig::default()
    };
    let (first, ok_a) = run("a", &sinlog)?;
    let (second, _) = run("b", &sinlog)?;
    let (third, ok_c) = run("c", &runge)?;
    let (fourth, _) = run("d", &runge)?;
    let elapsed = suite_start.elapsed();
    check(
        first == second && third == fourth && ok_a && ok_c && elapsed < Duration::from_secs(60),
        format!(
            "results.csv identical: {}, bounds satisfied: {}, suite time {elapsed:.2?}",
            first == second && third == fourth,
            ok_a && ok_c
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: Vec<Criterion> = vec![
        ("partition of unity", Box::new(partition_of_unity)),
        ("tanh kernel closed form", Box::new(kernel_closed_form)),
        ("denominator floor", Box::new(denominator_floor)),
        ("tanh tail constant", Box::new(tail_constant)),
        ("uniform convergence", Box::new(uniform_convergence)),
        ("modulus bound for E_n", Box::new(theorem3_domination)),
        ("Mellin-Taylor bound for E_n", Box::new(theorem4_domination)),
        ("quasi-interpolation bound", Box::new(quasi_interpolation)),
        ("log-Hölder rate", Box::new(holder_rate)),
        ("multivariate operator", Box::new(multivariate)),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("Mellin derivatives", Box::new(mellin_derivatives)),
        (
            "CLI reproducibility",
            Box::new(move || cli_reproducibility(start)),
        ),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        match run() {
            Ok(detail) => println!("[PASS] {id:>2} {name}: {detail}"),
            Err(detail) => {
                println!("[FAIL] {id:>2} {name}: {detail}");
                failed.push(id);
            }
        }
    }
    println!(
        "acceptance: {} of {} passed in {:.2?}",
        criteria.len() - failed.len(),
        criteria.len(),
        start.elapsed()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}

//! Result files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{CliError, Result};
use crate::experiment::SweepResult;

pub const RESULTS_HEADER: &str = "n,sup_error,mean_error,bound_t3,bound_t4,bound_t6,satisfied";

fn float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

fn opt(x: Option<f64>) -> String {
    float(x.unwrap_or(f64::NAN))
}

pub fn results_csv(result: &SweepResult) -> String {
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for r in &result.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n,
            float(r.sup_error),
            float(r.mean_error),
            opt(r.bound_t3),
            opt(r.bound_t4),
            opt(r.bound_t6),
            r.satisfied
        );
    }
    out
}

pub fn bounds_csv(result: &SweepResult) -> String {
    let mut out = String::from("n,theorem,nu,bound,measured_sup_error,satisfied\n");
    for r in &result.reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            r.theorem,
            float(r.nu),
            float(r.bound),
            float(r.measured_sup_error),
            r.satisfied
        );
    }
    out
}

pub fn plot_script(result: &SweepResult) -> String {
    let c = &result.config;
    format!(
        "set datafile separator ','\n\
         set logscale xy\n\
         set key top right\n\
         set xlabel 'n'\n\
         set ylabel 'error'\n\
         set title '{} {} {} (nu = {})'\n\
         plot 'results.csv' every ::1 using 1:2 with linespoints title 'sup error', \\\n\
         \x20    '' every ::1 using 1:3 with linespoints title 'mean error', \\\n\
         \x20    '' every ::1 using 1:4 with lines title 'T3 bound', \\\n\
         \x20    '' every ::1 using 1:5 with lines title 'T4 bound', \\\n\
         \x20    '' every ::1 using 1:6 with lines title 'T6 bound'\n",
        c.operator_family, c.kernel_name, c.function_name, c.nu
    )
}

pub fn summary(result: &SweepResult) -> String {
    let c = &result.config;
    let mut out = String::new();
    let _ = writeln!(out, "kernel: {}", c.kernel_name);
    let _ = writeln!(out, "operator: {}", c.operator_family);
    let _ = writeln!(out, "function: {}", c.function_name);
    match c.interval {
        Some((a, b)) => {
            let _ = writeln!(out, "interval: [{a}, {b}]");
        }
        None => {
            let _ = writeln!(out, "interval: registered domain");
        }
    }
    let scales: Vec<String> = c.scales.iter().map(u32::to_string).collect();
    let _ = writeln!(out, "scales: {}", scales.join(","));
    let _ = writeln!(out, "nu: {}", c.nu);
    let cr = &result.condition_report;
    let _ = writeln!(
        out,
        "sigmoid conditions: concavity {}, decay {}, symmetry {}",
        cr.condition_1_c2_concave, cr.condition_2_decay, cr.condition_3_odd_symmetry
    );
    for r in &result.rows {
        let _ = writeln!(
            out,
            "n = {:>6}  sup error {:.6e}  mean error {:.6e}  {}",
            r.n,
            r.sup_error,
            r.mean_error,
            if r.satisfied { "ok" } else { "BOUND VIOLATED" }
        );
    }
    match &result.rate {
        Some(fit) => {
            let _ = writeln!(
                out,
                "rate: slope {:.6} (r^2 = {:.6})",
                fit.slope, fit.r_squared
            );
        }
        None => {
            let _ = writeln!(out, "rate: not fitted");
        }
    }
    let checks = result.reports.len();
    let failed = result.reports.iter().filter(|r| !r.satisfied).count();
    let _ = writeln!(
        out,
        "bound checks: {} of {checks} satisfied",
        checks - failed
    );
    out
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| CliError::io(path, e))
}

pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    fs::write(path, results_csv(result)).map_err(|e| CliError::io(path, e))
}

pub fn write_all(result: &SweepResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    emit_csv(result, &dir.join("results.csv"))?;
    write(dir, "bounds.csv", &bounds_csv(result))?;
    write(dir, "plot.gp", &plot_script(result))?;
    write(dir, "summary.txt", &summary(result))
}

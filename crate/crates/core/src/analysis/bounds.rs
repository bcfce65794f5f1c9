//! Quantitative error bounds for the tanh-activated operators, and the
//! Hölder-class bound valid for any admissible kernel.
//!
//! Each bound is available as a pure formula of its inputs and as a
//! `BoundReport` that estimates the inputs on grids and attaches a measured
//! sup error.

use std::fmt;

use crate::analysis::measure::{bounded_error, grid_sup, quasi_error};
use crate::analysis::mellin::{mellin_fd, stencil_interior};
use crate::analysis::modulus::{log_modulus_of, modulus_grid_for};
use crate::density::{DensityKernel, DEFAULT_TRUNCATION_TOL};
use crate::error::{Error, Result};
use crate::function::FunctionHandle;
use crate::scalar::Scalar;

/// `1/χ_σ(e)` for the tanh kernel, to the precision used in the bounds.
pub const TANH_INV_CHI_E: f64 = 4.14925;
/// Tail constant `(e⁴ − 1)/(2e²)` of the tanh kernel.
pub const TANH_TAIL: f64 = 3.6268;
/// `2 × TANH_TAIL`.
pub const TANH_TAIL_TWICE: f64 = 7.2536;

/// Slack allowed when comparing a measured error to a bound.
pub const BOUND_SLACK: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// Log-Hölder rate for `E_n`.
    T2,
    /// Modulus-of-continuity estimate for `E_n`.
    T3,
    /// Mellin–Taylor estimate for `E_n` on `C²` functions.
    T4,
    /// Modulus-of-continuity estimate for `Q_n`.
    T6,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::T2 => "T2",
            Theorem::T3 => "T3",
            Theorem::T4 => "T4",
            Theorem::T6 => "T6",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundReport<T> {
    pub theorem: Theorem,
    pub n: u32,
    /// `ν` for T3/T4/T6, the Hölder exponent `λ` for T2.
    pub nu: T,
    pub bound: T,
    pub measured_sup_error: T,
    pub satisfied: bool,
}

impl<T: Scalar> BoundReport<T> {
    pub fn new(theorem: Theorem, n: u32, nu: T, bound: T, measured_sup_error: T) -> Self {
        Self {
            theorem,
            n,
            nu,
            bound,
            measured_sup_error,
            satisfied: measured_sup_error <= bound + T::lit(BOUND_SLACK),
        }
    }
}

/// Grid and safety settings for estimating bound inputs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundOptions<T> {
    /// Points used for sup norms (and the base modulus grid).
    pub norm_grid: usize,
    /// Points used to measure the operator error.
    pub eval_grid: usize,
    /// Multiplier applied to grid-estimated norms and moduli.
    pub safety: T,
    /// Window on which `Q_n` errors are measured.
    pub quasi_window: (T, T),
    /// `Q_n` series half-width; `None` uses the kernel default.
    pub truncation: Option<usize>,
}

impl<T: Scalar> Default for BoundOptions<T> {
    fn default() -> Self {
        Self {
            norm_grid: 2001,
            eval_grid: 501,
            safety: T::lit(1.01),
            quasi_window: (T::half(), T::lit(2.0)),
            truncation: None,
        }
    }
}

fn check_nu<T: Scalar>(nu: T) -> Result<()> {
    if nu > T::zero() && nu < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "nu must lie in (0, 1), got {nu}"
        )))
    }
}

fn require_tanh<T: Scalar>(kernel: &DensityKernel<T>) -> Result<()> {
    if kernel.is_tanh() {
        Ok(())
    } else {
        Err(Error::UnsupportedKernel(kernel.name().to_string()))
    }
}

fn scale<T: Scalar>(n: u32) -> T {
    T::from_u32(n).unwrap()
}

/// `ω(f, n^{-ν}) + 7.2536 ‖f‖ n^{ν−1}`.
pub fn theorem6_bound<T: Scalar>(omega: T, sup_norm: T, n: u32, nu: T) -> T {
    omega + T::lit(TANH_TAIL_TWICE) * sup_norm * scale::<T>(n).powf(nu - T::one())
}

/// `4.14925 (ω(f, n^{-ν}) + 7.2536 ‖f‖ n^{ν−1})`.
pub fn theorem3_bound<T: Scalar>(omega: T, sup_norm: T, n: u32, nu: T) -> T {
    T::lit(TANH_INV_CHI_E) * theorem6_bound(omega, sup_norm, n, nu)
}

/// Inputs of the Mellin–Taylor estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Theorem4Inputs<T> {
    /// `‖θf‖_∞`.
    pub theta1_norm: T,
    /// `‖θ²f‖_∞`.
    pub theta2_norm: T,
    /// `ω(θ²f, n^{-ν})`.
    pub omega_theta2: T,
    pub b_minus_a: T,
}

/// `4.14925 { Σ_{i=1}^{2} ‖θ^{(i)}f‖/i! (n^{-iν} + (b−a)^i · 3.6268/n^{1−ν})
///            + ω(θ²f, n^{-ν})/(2n^{2ν}) + 3.6268/n^{1−ν} ‖θ²f‖ (b−a)² }`.
pub fn theorem4_bound<T: Scalar>(inputs: &Theorem4Inputs<T>, n: u32, nu: T) -> T {
    let n = scale::<T>(n);
    let tail = T::lit(TANH_TAIL) * n.powf(nu - T::one());
    let two = T::lit(2.0);
    let d = inputs.b_minus_a;
    let first = inputs.theta1_norm * (n.powf(-nu) + d * tail);
    let second = inputs.theta2_norm / two * (n.powf(-two * nu) + d * d * tail);
    let modulus = inputs.omega_theta2 / (two * n.powf(two * nu));
    let extra = tail * inputs.theta2_norm * d * d;
    T::lit(TANH_INV_CHI_E) * (first + second + modulus + extra)
}

/// `(H n^{-λ} M_λ + 2‖f‖ δ^{-λ} n^{-λ} M_λ) / χ_σ(e)` with `δ = 1`.
pub fn theorem2_bound<T: Scalar>(
    holder_h: T,
    lambda: T,
    moment: T,
    sup_norm: T,
    chi_e: T,
    n: u32,
) -> T {
    let decay = scale::<T>(n).powf(-lambda);
    (holder_h * decay * moment + T::lit(2.0) * sup_norm * decay * moment) / chi_e
}

/// Estimates the Mellin–Taylor inputs from callables for `θf` and `θ²f` on `[a, b]`.
#[allow(clippy::too_many_arguments)]
pub fn theorem4_inputs_from<T, F1, F2>(
    theta1: F1,
    theta2: F2,
    interval: (T, T),
    b_minus_a: T,
    n: u32,
    nu: T,
    grid: usize,
    safety: T,
) -> Result<Theorem4Inputs<T>>
where
    T: Scalar,
    F1: Fn(T) -> T,
    F2: Fn(T) -> T,
{
    let (lo, hi) = interval;
    let delta = scale::<T>(n).powf(-nu);
    let omega = log_modulus_of(
        &theta2,
        lo,
        hi,
        delta,
        modulus_grid_for(lo, hi, delta, grid),
    )?;
    Ok(Theorem4Inputs {
        theta1_norm: safety * grid_sup(&theta1, lo, hi, grid),
        theta2_norm: safety * grid_sup(&theta2, lo, hi, grid),
        omega_theta2: safety * omega.value,
        b_minus_a,
    })
}

/// Finite-difference Mellin norms of `f` for the T4 bound.
pub fn theorem4_inputs_fd<T: Scalar>(
    f: &FunctionHandle<T>,
    n: u32,
    nu: T,
    opts: &BoundOptions<T>,
) -> Result<Theorem4Inputs<T>> {
    let (a, b) = f.domain();
    // Both stencils must fit; the wider one sets the interior.
    let interior = stencil_interior(f, 2);
    theorem4_inputs_from(
        mellin_fd(f, 1),
        mellin_fd(f, 2),
        interior,
        b - a,
        n,
        nu,
        opts.norm_grid,
        opts.safety,
    )
}

/// T3 bound for `f` on its domain, paired with an already measured sup error.
pub fn theorem3_report<T: Scalar>(
    f: &FunctionHandle<T>,
    n: u32,
    nu: T,
    measured_sup_error: T,
    opts: &BoundOptions<T>,
) -> Result<BoundReport<T>> {
    check_nu(nu)?;
    if !f.tags().continuous {
        return Err(Error::Precondition(format!(
            "`{}` is not tagged continuous",
            f.name()
        )));
    }
    let (a, b) = f.domain();
    let delta = scale::<T>(n).powf(-nu);
    let omega = log_modulus_of(
        |x| f.eval(x),
        a,
        b,
        delta,
        modulus_grid_for(a, b, delta, opts.norm_grid),
    )?;
    let sup = grid_sup(|x| f.eval(x), a, b, opts.norm_grid);
    let bound = theorem3_bound(opts.safety * omega.value, opts.safety * sup, n, nu);
    Ok(BoundReport::new(
        Theorem::T3,
        n,
        nu,
        bound,
        measured_sup_error,
    ))
}

pub fn bound_theorem3<T: Scalar>(
    f: &FunctionHandle<T>,
    kernel: &DensityKernel<T>,
    n: u32,
    nu: T,
    opts: &BoundOptions<T>,
) -> Result<BoundReport<T>> {
    require_tanh(kernel)?;
    check_nu(nu)?;
    let measured = bounded_error(kernel, f, n, opts.eval_grid)?.sup;
    theorem3_report(f, n, nu, measured, opts)
}

pub fn theorem4_report<T: Scalar>(
    f: &FunctionHandle<T>,
    n: u32,
    nu: T,
    measured_sup_error: T,
    opts: &BoundOptions<T>,
) -> Result<BoundReport<T>> {
    check_nu(nu)?;
    if !f.tags().c2 {
        return Err(Error::Precondition(format!(
            "`{}` is not tagged C2",
            f.name()
        )));
    }
    let inputs = theorem4_inputs_fd(f, n, nu, opts)?;
    Ok(BoundReport::new(
        Theorem::T4,
        n,
        nu,
        theorem4_bound(&inputs, n, nu),
        measured_sup_error,
    ))
}

pub fn bound_theorem4<T: Scalar>(
    f: &FunctionHandle<T>,
    kernel: &DensityKernel<T>,
    n: u32,
    nu: T,
    opts: &BoundOptions<T>,
) -> Result<BoundReport<T>> {
    require_tanh(kernel)?;
    check_nu(nu)?;
    if !f.tags().c2 {
        return Err(Error::Precondition(format!(
            "`{}` is not tagged C2",
            f.name()
        )));
    }
    let measured = bounded_error(kernel, f, n, opts.eval_grid)?.sup;
    theorem4_report(f, n, nu, measured, opts)
}

/// `‖f‖_∞` on `ℝ⁺`: the recorded value when known, else a grid sup over `[lo, hi]` with safety.
fn half_line_norm<T: Scalar>(f: &FunctionHandle<T>, lo: T, hi: T, opts: &BoundOptions<T>) -> T {
    f.global_sup()
        .unwrap_or_else(|| opts.safety * grid_sup(|x| f.eval(x), lo, hi, opts.norm_grid))
}

pub fn theorem6_report<T: Scalar>(
    f: &FunctionHandle<T>,
    n: u32,
    nu: T,
    measured_sup_error: T,
    opts: &BoundOptions<T>,
) -> Result<BoundReport<T>> {
    check_nu(nu)?;
    if !f.tags().continuous {
        return Err(Error::Precondition(format!(
            "`{}` is not tagged continuous",
            f.name()
        )));
    }
    let delta = scale::<T>(n).powf(-nu);
    // Pairs (x, y) with x in the window and |log x − log y| ≤ δ.
    let (lo, hi) = opts.quasi_window;
    let (lo, hi) = (lo * (-delta).exp(), hi * delta.exp());
    let omega = log_modulus_of(
        |x| f.eval(x),
        lo,
        hi,
        delta,
        modulus_grid_for(lo, hi, delta, opts.norm_grid),
    )?;
    let bound = theorem6_bound(
        opts.safety * omega.value,
        half_line_norm(f, lo, hi, opts),
        n,
        nu,
    );
    Ok(BoundReport::new(
        Theorem::T6,
        n,
        nu,
        bound,
        measured_sup_error,
    ))
}

pub fn bound_theorem6<T: Scalar>(
    f: &FunctionHandle<T>,
    kernel: &DensityKernel<T>,
    n: u32,
    nu: T,
    opts: &BoundOptions<T>,
) -> Result<BoundReport<T>> {
    require_tanh(kernel)?;
    check_nu(nu)?;
    if !(f.tags().bounded || f.global_sup().is_some()) {
        return Err(Error::Precondition(format!(
            "`{}` is not bounded on the half-line",
            f.name()
        )));
    }
    let truncation = opts
        .truncation
        .unwrap_or_else(|| kernel.default_truncation(T::lit(DEFAULT_TRUNCATION_TOL)));
    let measured = quasi_error(kernel, f, n, truncation, opts.quasi_window, opts.eval_grid)?.sup;
    theorem6_report(f, n, nu, measured, opts)
}

pub fn theorem2_report<T: Scalar>(
    f: &FunctionHandle<T>,
    kernel: &DensityKernel<T>,
    n: u32,
    measured_sup_error: T,
    opts: &BoundOptions<T>,
) -> Result<BoundReport<T>> {
    let (lambda, h) = f
        .tags()
        .log_holder
        .ok_or_else(|| Error::Precondition(format!("`{}` has no log-Hölder tag", f.name())))?;
    let moment = kernel.sup_absolute_moment(
        lambda,
        kernel.default_truncation(T::lit(DEFAULT_TRUNCATION_TOL)),
    )?;
    if !moment.is_finite() {
        return Err(Error::Precondition(format!(
            "absolute moment of order {lambda} diverges"
        )));
    }
    let (a, b) = f.domain();
    let sup = opts.safety * grid_sup(|x| f.eval(x), a, b, opts.norm_grid);
    let bound = theorem2_bound(h, lambda, moment, sup, kernel.value_at_e(), n);
    Ok(BoundReport::new(
        Theorem::T2,
        n,
        lambda,
        bound,
        measured_sup_error,
    ))
}

pub fn bound_theorem2<T: Scalar>(
    f: &FunctionHandle<T>,
    kernel: &DensityKernel<T>,
    n: u32,
    opts: &BoundOptions<T>,
) -> Result<BoundReport<T>> {
    if f.tags().log_holder.is_none() {
        return Err(Error::Precondition(format!(
            "`{}` has no log-Hölder tag",
            f.name()
        )));
    }
    let measured = bounded_error(kernel, f, n, opts.eval_grid)?.sup;
    theorem2_report(f, kernel, n, measured, opts)
}

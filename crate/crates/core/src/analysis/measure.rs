//! Grid measurements of operator approximation error.

use crate::density::DensityKernel;
use crate::error::Result;
use crate::function::FunctionHandle;
use crate::operators::{BoundedOperator, QuasiOperator};
use crate::scalar::{log_grid, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorProfile<T> {
    pub points: Vec<T>,
    pub errors: Vec<T>,
    pub sup: T,
    pub mean: T,
}

impl<T: Scalar> ErrorProfile<T> {
    pub fn from_errors(points: Vec<T>, errors: Vec<T>) -> Self {
        let sup = errors.iter().fold(T::zero(), |m, &e| m.max(e));
        let mean = errors.iter().fold(T::zero(), |a, &e| a + e)
            / T::from_usize(errors.len().max(1)).unwrap();
        Self {
            points,
            errors,
            sup,
            mean,
        }
    }
}

/// `|E_n(f, x) − f(x)|` at the given points.
pub fn bounded_error_at<T: Scalar>(
    kernel: &DensityKernel<T>,
    f: &FunctionHandle<T>,
    n: u32,
    points: Vec<T>,
) -> Result<ErrorProfile<T>> {
    let op = BoundedOperator::new(kernel, f, n)?;
    let values = op.eval_many(&points)?;
    let errors = points
        .iter()
        .zip(values)
        .map(|(&x, v)| (v - f.eval(x)).abs())
        .collect();
    Ok(ErrorProfile::from_errors(points, errors))
}

/// `E_n` error on `grid` log-uniform points of the function's domain.
pub fn bounded_error<T: Scalar>(
    kernel: &DensityKernel<T>,
    f: &FunctionHandle<T>,
    n: u32,
    grid: usize,
) -> Result<ErrorProfile<T>> {
    let (a, b) = f.domain();
    bounded_error_at(kernel, f, n, log_grid(a, b, grid))
}

/// `|Q_n(f, x) − f(x)|` at the given points, all inside `window`.
pub fn quasi_error_at<T: Scalar>(
    kernel: &DensityKernel<T>,
    f: &FunctionHandle<T>,
    n: u32,
    truncation: usize,
    window: (T, T),
    points: Vec<T>,
) -> Result<ErrorProfile<T>> {
    let op = QuasiOperator::new(kernel, f, n, truncation, window)?;
    let values = op.eval_many(&points)?;
    let errors = points
        .iter()
        .zip(values)
        .map(|(&x, v)| (v.value - f.eval(x)).abs())
        .collect();
    Ok(ErrorProfile::from_errors(points, errors))
}

/// `Q_n` error on `grid` log-uniform points of `window`.
pub fn quasi_error<T: Scalar>(
    kernel: &DensityKernel<T>,
    f: &FunctionHandle<T>,
    n: u32,
    truncation: usize,
    window: (T, T),
    grid: usize,
) -> Result<ErrorProfile<T>> {
    quasi_error_at(
        kernel,
        f,
        n,
        truncation,
        window,
        log_grid(window.0, window.1, grid),
    )
}

/// Grid supremum of `|g|` over `grid` log-uniform points of `[lo, hi]`.
pub fn grid_sup<T: Scalar, G: Fn(T) -> T>(g: G, lo: T, hi: T, grid: usize) -> T {
    log_grid(lo, hi, grid)
        .into_iter()
        .fold(T::zero(), |m, x| m.max(g(x).abs()))
}

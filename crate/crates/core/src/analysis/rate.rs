//! Empirical convergence order from `(n, error)` pairs.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ordinary least squares `y ≈ slope·x + intercept`; returns `(slope, intercept, r²)`.
pub(crate) fn linear_fit<T: Scalar>(xs: &[T], ys: &[T]) -> (T, T, T) {
    let count = T::from_usize(xs.len()).unwrap();
    let mx = xs.iter().fold(T::zero(), |a, &v| a + v) / count;
    let my = ys.iter().fold(T::zero(), |a, &v| a + v) / count;
    let (mut sxx, mut sxy, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx = sxx + dx * dx;
        sxy = sxy + dx * dy;
        syy = syy + dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .fold(T::zero(), |a, v| a + v);
    let r_squared = if syy == T::zero() {
        T::one()
    } else {
        T::one() - ss_res / syy
    };
    (slope, intercept, r_squared)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateFit<T> {
    /// Scales that survived filtering, ascending.
    pub scales: Vec<T>,
    pub errors: Vec<T>,
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
}

/// Fits `log error = slope·log n + intercept`. Non-positive or non-finite
/// errors are dropped; at least four scales spanning a decade must remain.
pub fn fit_rate<T: Scalar>(errors_by_n: &[(T, T)]) -> Result<RateFit<T>> {
    let mut kept: Vec<(T, T)> = errors_by_n
        .iter()
        .copied()
        .filter(|&(n, e)| n > T::zero() && e > T::zero() && e.is_finite())
        .collect();
    kept.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    if kept.len() < 4 {
        return Err(Error::Fit(format!(
            "need at least 4 positive errors, got {}",
            kept.len()
        )));
    }
    let span = kept[kept.len() - 1].0 / kept[0].0;
    if span < T::lit(10.0) {
        return Err(Error::Fit(format!(
            "scales span a factor {span}, need at least 10"
        )));
    }
    let xs: Vec<T> = kept.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<T> = kept.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept, r_squared) = linear_fit(&xs, &ys);
    Ok(RateFit {
        scales: kept.iter().map(|p| p.0).collect(),
        errors: kept.iter().map(|p| p.1).collect(),
        slope,
        intercept,
        r_squared,
    })
}

//! Logarithmic modulus of continuity
//! `ω(f, δ) = sup { |f(x) − f(y)| : |log x − log y| ≤ δ }`.

use std::collections::VecDeque;

use crate::density::check_interval;
use crate::error::{Error, Result};
use crate::function::FunctionHandle;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModulusEstimate<T> {
    pub delta: T,
    pub value: T,
    pub grid_size: usize,
}

/// `ω(f, δ)` over the function's domain, sampled on `grid` log-uniform points.
pub fn log_modulus<T: Scalar>(
    f: &FunctionHandle<T>,
    delta: T,
    grid: usize,
) -> Result<ModulusEstimate<T>> {
    let (a, b) = f.domain();
    log_modulus_of(|x| f.eval(x), a, b, delta, grid)
}

/// `ω(g, δ)` over `[lo, hi]`.
///
/// Points lie on a uniform grid in `t = log x` with step `h`; every pair at
/// index distance at most `⌊δ/h⌋` satisfies the constraint exactly, so the
/// supremum reduces to the largest range of a sliding window. The result is a
/// lower bound of the true modulus and is non-decreasing in `δ` for a fixed grid.
pub fn log_modulus_of<T, G>(g: G, lo: T, hi: T, delta: T, grid: usize) -> Result<ModulusEstimate<T>>
where
    T: Scalar,
    G: Fn(T) -> T,
{
    check_interval(lo, hi)?;
    if grid < 100 {
        return Err(Error::InvalidParameter(format!(
            "modulus grid needs >= 100 points, got {grid}"
        )));
    }
    if !(delta > T::zero()) {
        return Err(Error::Domain(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let (t0, t1) = (lo.ln(), hi.ln());
    let step = (t1 - t0) / T::from_usize(grid - 1).unwrap();
    let values: Vec<T> = (0..grid)
        .map(|i| {
            let x = match i {
                0 => lo,
                i if i == grid - 1 => hi,
                i => (t0 + step * T::from_usize(i).unwrap()).exp(),
            };
            g(x)
        })
        .collect();
    let reach = ((delta / step) * (T::one() + T::lit(1e-12)))
        .floor()
        .to_usize()
        .unwrap_or(usize::MAX)
        .min(grid - 1);

    // Monotone deques holding indices of the running max and min.
    let mut max_q: VecDeque<usize> = VecDeque::new();
    let mut min_q: VecDeque<usize> = VecDeque::new();
    let mut best = T::zero();
    for (j, &v) in values.iter().enumerate() {
        while max_q.back().is_some_and(|&i| values[i] <= v) {
            max_q.pop_back();
        }
        max_q.push_back(j);
        while min_q.back().is_some_and(|&i| values[i] >= v) {
            min_q.pop_back();
        }
        min_q.push_back(j);
        let start = j.saturating_sub(reach);
        while max_q.front().is_some_and(|&i| i < start) {
            max_q.pop_front();
        }
        while min_q.front().is_some_and(|&i| i < start) {
            min_q.pop_front();
        }
        let range = values[max_q[0]] - values[min_q[0]];
        if range > best {
            best = range;
        }
    }
    Ok(ModulusEstimate {
        delta,
        value: best,
        grid_size: grid,
    })
}

/// Grid size giving at least 64 grid steps per `δ` on `[lo, hi]`, and at least `base` points.
pub fn modulus_grid_for<T: Scalar>(lo: T, hi: T, delta: T, base: usize) -> usize {
    let span = (hi / lo).ln();
    let needed = (T::lit(64.0) * span / delta)
        .ceil()
        .to_usize()
        .unwrap_or(usize::MAX);
    base.max(needed.saturating_add(1)).min(4_000_001)
}

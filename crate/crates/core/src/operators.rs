//! Exponential-type neural network operators.
//!
//! * `E_n` (bounded interval): `Σ f(e^{k/n}) χ(e^{-k}x^n) / Σ χ(e^{-k}x^n)` over
//!   `k ∈ [⌈n log a⌉, ⌊n log b⌋]`.
//! * `Q_n` (quasi-interpolation): the un-normalized bi-infinite series, truncated
//!   to `|k − n log x| ≤ K`.
//! * multivariate `E_n` with the product kernel `Π χ(x_i)`.
//! * `S_w`: generalized exponential sampling series with real scale `w`.
//!
//! The `*_eval` free functions evaluate from scratch. The `*Operator` types
//! sample `f` once at the lattice nodes and can then be evaluated concurrently.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::density::{check_positive, index_range, DensityKernel, DEFAULT_TRUNCATION_TOL};
use crate::error::{Error, Result};
use crate::function::{FunctionHandle, MultiFunctionHandle};
use crate::scalar::{CompensatedSum, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorFamily {
    /// `E_n` on `[a, b]`.
    Bounded,
    /// `Q_n` on `ℝ⁺`.
    Quasi,
    /// `E_n` on a box with the product kernel.
    Multivariate,
    /// `S_w`.
    Sampling,
}

impl OperatorFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            OperatorFamily::Bounded => "E_n",
            OperatorFamily::Quasi => "Q_n",
            OperatorFamily::Multivariate => "E_n_multivariate",
            OperatorFamily::Sampling => "S_w",
        }
    }
}

impl fmt::Display for OperatorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OperatorFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "e_n" | "en" => Ok(OperatorFamily::Bounded),
            "q_n" | "qn" => Ok(OperatorFamily::Quasi),
            "e_n_multivariate" | "en_multivariate" | "en_multi" => Ok(OperatorFamily::Multivariate),
            "s_w" | "sw" => Ok(OperatorFamily::Sampling),
            _ => Err(Error::Lookup(s.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct OperatorConfig<T> {
    pub family: OperatorFamily,
    pub kernel: DensityKernel<T>,
    /// `n` (integral for every family but `S_w`) or `w`.
    pub scale: T,
    /// Series half-width `K`; `None` picks the kernel default.
    pub truncation_k: Option<usize>,
    pub dimension: usize,
}

impl<T: Scalar> OperatorConfig<T> {
    pub fn bounded(kernel: DensityKernel<T>, n: u32) -> Self {
        Self {
            family: OperatorFamily::Bounded,
            kernel,
            scale: T::from_u32(n).unwrap(),
            truncation_k: None,
            dimension: 1,
        }
    }

    pub fn quasi(kernel: DensityKernel<T>, n: u32, truncation_k: Option<usize>) -> Self {
        Self {
            family: OperatorFamily::Quasi,
            kernel,
            scale: T::from_u32(n).unwrap(),
            truncation_k,
            dimension: 1,
        }
    }

    pub fn multivariate(kernel: DensityKernel<T>, n: u32, dimension: usize) -> Self {
        Self {
            family: OperatorFamily::Multivariate,
            kernel,
            scale: T::from_u32(n).unwrap(),
            truncation_k: None,
            dimension,
        }
    }

    pub fn sampling(kernel: DensityKernel<T>, w: T, truncation_k: Option<usize>) -> Self {
        Self {
            family: OperatorFamily::Sampling,
            kernel,
            scale: w,
            truncation_k,
            dimension: 1,
        }
    }

    /// Effective series half-width.
    pub fn truncation(&self) -> usize {
        self.truncation_k.unwrap_or_else(|| {
            self.kernel
                .default_truncation(T::lit(DEFAULT_TRUNCATION_TOL))
        })
    }

    fn expect(&self, family: OperatorFamily) -> Result<()> {
        if self.family != family {
            return Err(Error::InvalidParameter(format!(
                "operator configured as {}, expected {family}",
                self.family
            )));
        }
        if !(self.scale > T::zero()) || !self.scale.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "scale must be positive, got {}",
                self.scale
            )));
        }
        if family != OperatorFamily::Sampling && self.scale.fract() != T::zero() {
            return Err(Error::InvalidParameter(format!(
                "scale n must be an integer, got {}",
                self.scale
            )));
        }
        Ok(())
    }
}

/// Value of a truncated series together with a bound on the discarded part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue<T> {
    pub value: T,
    pub tail_estimate: T,
}

/// `f(e^{k/scale})` for `k ∈ [k_lo, k_hi]`.
#[derive(Clone, Debug)]
pub struct LatticeSamples<T> {
    k_lo: i64,
    values: Vec<T>,
}

impl<T: Scalar> LatticeSamples<T> {
    pub fn new(f: &FunctionHandle<T>, scale: T, k_lo: i64, k_hi: i64) -> Result<Self> {
        let values = (k_lo..=k_hi)
            .map(|k| f.try_eval((T::from_int(k) / scale).exp()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { k_lo, values })
    }

    #[inline]
    pub fn get(&self, k: i64) -> T {
        self.values[(k - self.k_lo) as usize]
    }

    pub fn range(&self) -> (i64, i64) {
        (self.k_lo, self.k_lo + self.values.len() as i64 - 1)
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

/// `E_n` on `[a, b]` with samples precomputed.
#[derive(Clone, Debug)]
pub struct BoundedOperator<T> {
    kernel: DensityKernel<T>,
    scale: T,
    interval: (T, T),
    samples: LatticeSamples<T>,
}

impl<T: Scalar> BoundedOperator<T> {
    pub fn new(kernel: &DensityKernel<T>, f: &FunctionHandle<T>, n: u32) -> Result<Self> {
        let (a, b) = f.domain();
        let scale = T::from_u32(n).unwrap();
        let (lo, hi) = index_range(scale, a, b)?;
        Ok(Self {
            kernel: kernel.clone(),
            scale,
            interval: (a, b),
            samples: LatticeSamples::new(f, scale, lo, hi)?,
        })
    }

    pub fn from_config(cfg: &OperatorConfig<T>, f: &FunctionHandle<T>) -> Result<Self> {
        cfg.expect(OperatorFamily::Bounded)?;
        Self::new(&cfg.kernel, f, cfg.scale.to_u32().unwrap())
    }

    pub fn eval(&self, x: T) -> Result<T> {
        let (a, b) = self.interval;
        check_positive(x, "x")?;
        if x < a || x > b {
            return Err(Error::Domain(format!("x = {x} outside [{a}, {b}]")));
        }
        let s = self.scale * x.ln();
        let (lo, hi) = self.samples.range();
        let mut num = CompensatedSum::new();
        let mut den = CompensatedSum::new();
        for k in lo..=hi {
            let w = self.kernel.eval_log(s - T::from_int(k));
            num.add(self.samples.get(k) * w);
            den.add(w);
        }
        Ok(num.value() / den.value())
    }

    pub fn eval_many(&self, xs: &[T]) -> Result<Vec<T>> {
        xs.par_iter().map(|&x| self.eval(x)).collect()
    }
}

pub fn nn_eval<T: Scalar>(cfg: &OperatorConfig<T>, f: &FunctionHandle<T>, x: T) -> Result<T> {
    BoundedOperator::from_config(cfg, f)?.eval(x)
}

/// `Q_n` restricted to evaluation points in `window`, samples precomputed.
#[derive(Clone, Debug)]
pub struct QuasiOperator<T> {
    kernel: DensityKernel<T>,
    scale: T,
    truncation: usize,
    window: (T, T),
    samples: LatticeSamples<T>,
    norm: T,
}

impl<T: Scalar> QuasiOperator<T> {
    pub fn new(
        kernel: &DensityKernel<T>,
        f: &FunctionHandle<T>,
        n: u32,
        truncation: usize,
        window: (T, T),
    ) -> Result<Self> {
        Self::with_scale(kernel, f, T::from_u32(n).unwrap(), truncation, window)
    }

    fn with_scale(
        kernel: &DensityKernel<T>,
        f: &FunctionHandle<T>,
        scale: T,
        truncation: usize,
        window: (T, T),
    ) -> Result<Self> {
        crate::density::check_interval(window.0, window.1)?;
        let k = truncation as i64;
        let lo = (scale * window.0.ln()).floor().to_i64().unwrap() - k;
        let hi = (scale * window.1.ln()).ceil().to_i64().unwrap() + k;
        let samples = LatticeSamples::new(f, scale, lo, hi)?;
        let norm = f.global_sup().unwrap_or_else(|| samples.max_abs());
        Ok(Self {
            kernel: kernel.clone(),
            scale,
            truncation,
            window,
            samples,
            norm,
        })
    }

    pub fn from_config(
        cfg: &OperatorConfig<T>,
        f: &FunctionHandle<T>,
        window: (T, T),
    ) -> Result<Self> {
        cfg.expect(OperatorFamily::Quasi)?;
        Self::new(
            &cfg.kernel,
            f,
            cfg.scale.to_u32().unwrap(),
            cfg.truncation(),
            window,
        )
    }

    pub fn eval(&self, x: T) -> Result<SeriesValue<T>> {
        check_positive(x, "x")?;
        if x < self.window.0 || x > self.window.1 {
            return Err(Error::Domain(format!(
                "x = {x} outside the prepared window [{}, {}]",
                self.window.0, self.window.1
            )));
        }
        let s = self.scale * x.ln();
        let (lo, hi) = series_window(s, self.truncation);
        let value = (lo..=hi)
            .map(|k| self.samples.get(k) * self.kernel.eval_log(s - T::from_int(k)))
            .collect::<CompensatedSum<T>>()
            .value();
        let tail_estimate = T::lit(2.0) * self.norm * self.kernel.mass_outside(s, lo, hi);
        Ok(SeriesValue {
            value,
            tail_estimate,
        })
    }

    pub fn eval_many(&self, xs: &[T]) -> Result<Vec<SeriesValue<T>>> {
        xs.par_iter().map(|&x| self.eval(x)).collect()
    }
}

/// Indices `k` with `|k − s| ≤ K`.
fn series_window<T: Scalar>(s: T, truncation: usize) -> (i64, i64) {
    let k = T::from_usize(truncation).unwrap();
    (
        (s - k).ceil().to_i64().unwrap(),
        (s + k).floor().to_i64().unwrap(),
    )
}

/// Direct `Σ_{|k − scale·log x| ≤ K} f(e^{k/scale}) χ(e^{-k} x^{scale})`.
fn truncated_series<T: Scalar>(
    kernel: &DensityKernel<T>,
    f: &FunctionHandle<T>,
    scale: T,
    truncation: usize,
    x: T,
) -> Result<SeriesValue<T>> {
    check_positive(x, "x")?;
    let s = scale * x.ln();
    let (lo, hi) = series_window(s, truncation);
    let mut acc = CompensatedSum::new();
    let mut norm = T::zero();
    for k in lo..=hi {
        let fk = f.try_eval((T::from_int(k) / scale).exp())?;
        norm = norm.max(fk.abs());
        acc.add(fk * kernel.eval_log(s - T::from_int(k)));
    }
    let norm = f.global_sup().unwrap_or(norm);
    Ok(SeriesValue {
        value: acc.value(),
        tail_estimate: T::lit(2.0) * norm * kernel.mass_outside(s, lo, hi),
    })
}

pub fn quasi_eval<T: Scalar>(
    cfg: &OperatorConfig<T>,
    f: &FunctionHandle<T>,
    x: T,
) -> Result<SeriesValue<T>> {
    cfg.expect(OperatorFamily::Quasi)?;
    truncated_series(&cfg.kernel, f, cfg.scale, cfg.truncation(), x)
}

/// Generalized exponential sampling series `S_w`.
pub fn classical_eval<T: Scalar>(
    cfg: &OperatorConfig<T>,
    f: &FunctionHandle<T>,
    x: T,
) -> Result<SeriesValue<T>> {
    cfg.expect(OperatorFamily::Sampling)?;
    truncated_series(&cfg.kernel, f, cfg.scale, cfg.truncation(), x)
}

/// `S_w` with samples precomputed for `x ∈ window`.
#[derive(Clone, Debug)]
pub struct SamplingOperator<T>(QuasiOperator<T>);

impl<T: Scalar> SamplingOperator<T> {
    pub fn new(
        kernel: &DensityKernel<T>,
        f: &FunctionHandle<T>,
        w: T,
        truncation: usize,
        window: (T, T),
    ) -> Result<Self> {
        if !(w > T::zero()) || !w.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "scale w must be positive, got {w}"
            )));
        }
        QuasiOperator::with_scale(kernel, f, w, truncation, window).map(Self)
    }

    pub fn eval(&self, x: T) -> Result<SeriesValue<T>> {
        self.0.eval(x)
    }

    pub fn eval_many(&self, xs: &[T]) -> Result<Vec<SeriesValue<T>>> {
        self.0.eval_many(xs)
    }
}

/// Multivariate `E_n` on a box with the product kernel.
#[derive(Clone, Debug)]
pub struct MultivariateOperator<T> {
    kernel: DensityKernel<T>,
    scale: T,
    domain: Vec<(T, T)>,
    ranges: Vec<(i64, i64)>,
    /// Row-major samples, last axis fastest.
    samples: Vec<T>,
}

impl<T: Scalar> MultivariateOperator<T> {
    pub fn new(kernel: &DensityKernel<T>, f: &MultiFunctionHandle<T>, n: u32) -> Result<Self> {
        let scale = T::from_u32(n).unwrap();
        let ranges = f
            .domain()
            .iter()
            .map(|&(a, b)| index_range(scale, a, b))
            .collect::<Result<Vec<_>>>()?;
        let total: usize = ranges
            .iter()
            .map(|(lo, hi)| (hi - lo + 1) as usize)
            .product();
        let dim = ranges.len();
        let mut samples = Vec::with_capacity(total);
        let mut index: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        let mut point = vec![T::zero(); dim];
        for _ in 0..total {
            for (p, &k) in point.iter_mut().zip(&index) {
                *p = (T::from_int(k) / scale).exp();
            }
            let v = f.eval(&point);
            if !v.is_finite() {
                return Err(Error::Evaluation {
                    name: f.name().to_string(),
                    x: point[0].as_f64(),
                });
            }
            samples.push(v);
            // odometer, last axis fastest
            for axis in (0..dim).rev() {
                if index[axis] < ranges[axis].1 {
                    index[axis] += 1;
                    break;
                }
                index[axis] = ranges[axis].0;
            }
        }
        Ok(Self {
            kernel: kernel.clone(),
            scale,
            domain: f.domain().to_vec(),
            ranges,
            samples,
        })
    }

    pub fn from_config(cfg: &OperatorConfig<T>, f: &MultiFunctionHandle<T>) -> Result<Self> {
        cfg.expect(OperatorFamily::Multivariate)?;
        if cfg.dimension != f.dimension() {
            return Err(Error::InvalidParameter(format!(
                "operator dimension {} does not match function dimension {}",
                cfg.dimension,
                f.dimension()
            )));
        }
        Self::new(&cfg.kernel, f, cfg.scale.to_u32().unwrap())
    }

    pub fn eval(&self, x: &[T]) -> Result<T> {
        if x.len() != self.domain.len() {
            return Err(Error::Domain(format!(
                "expected a point of dimension {}, got {}",
                self.domain.len(),
                x.len()
            )));
        }
        let mut weights = Vec::with_capacity(x.len());
        let mut den = T::one();
        for ((&xi, &(a, b)), &(lo, hi)) in x.iter().zip(&self.domain).zip(&self.ranges) {
            check_positive(xi, "x")?;
            if xi < a || xi > b {
                return Err(Error::Domain(format!("coordinate {xi} outside [{a}, {b}]")));
            }
            let s = self.scale * xi.ln();
            let w: Vec<T> = (lo..=hi)
                .map(|k| self.kernel.eval_log(s - T::from_int(k)))
                .collect();
            den = den * w.iter().copied().collect::<CompensatedSum<T>>().value();
            weights.push(w);
        }
        // Contract one axis at a time, starting from the fastest.
        let mut table = self.samples.clone();
        for w in weights.iter().rev() {
            table = table
                .chunks_exact(w.len())
                .map(|row| {
                    row.iter()
                        .zip(w)
                        .map(|(&v, &wk)| v * wk)
                        .collect::<CompensatedSum<T>>()
                        .value()
                })
                .collect();
        }
        Ok(table[0] / den)
    }

    pub fn eval_many(&self, xs: &[Vec<T>]) -> Result<Vec<T>> {
        xs.par_iter().map(|x| self.eval(x)).collect()
    }
}

pub fn nn_eval_multi<T: Scalar>(
    cfg: &OperatorConfig<T>,
    f: &MultiFunctionHandle<T>,
    x: &[T],
) -> Result<T> {
    MultivariateOperator::from_config(cfg, f)?.eval(x)
}

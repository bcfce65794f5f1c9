//! Density kernel `χ_σ(x) = ½[σ(log x + 1) − σ(log x − 1)]` and the lattice
//! sums built from it: partition of unity, the bounded-interval denominator,
//! algebraic/absolute moments and tail masses.
//!
//! Everything is evaluated in log coordinates. With `φ(t) = χ_σ(e^t)` and
//! `s = log u`, the lattice sum `Σ_k χ_σ(e^{-k} u)` becomes `Σ_k φ(s − k)`, which
//! avoids overflow of `x^n` for large scales.

use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Scalar};
use crate::sigmoids::{ConditionStatus, SigmoidSpec, TailClass};

/// Truncation half-width used for kernels whose tail is exponential or compact.
pub const DEFAULT_TRUNCATION: usize = 50;

/// Tolerance the default truncation targets for polynomial tails.
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-12;

const MAX_TRUNCATION: usize = 1 << 24;

#[derive(Clone, Debug)]
pub struct DensityKernel<T> {
    sigmoid: SigmoidSpec<T>,
    closed_form: Option<fn(T) -> T>,
}

/// Rational form of the tanh density,
/// `x²(e⁴ − 1) / (2 (x²(1 + e⁴ + e² x²) + e²))`.
fn tanh_closed_form<T: Scalar>(x: T) -> T {
    let e2 = T::lit(std::f64::consts::E * std::f64::consts::E);
    let e4 = e2 * e2;
    let x2 = x * x;
    let one = T::one();
    x2 * (e4 - one) / ((x2 * (one + e4 + e2 * x2) + e2) * T::lit(2.0))
}

impl<T: Scalar> DensityKernel<T> {
    /// Builds the kernel, rejecting activations that fail the decay or
    /// symmetry conditions. Concavity is reported but not enforced.
    pub fn new(sigmoid: SigmoidSpec<T>) -> Result<Self> {
        let report = sigmoid.check_conditions(T::lit(10.0), 1000)?;
        let reject = |reason: String| Error::Construction {
            name: sigmoid.name().to_string(),
            reason,
        };
        if report.condition_2_decay == ConditionStatus::Fail {
            return Err(reject(format!(
                "tail decay slope {} is slower than required",
                report.fitted_decay_slope
            )));
        }
        if report.condition_3_odd_symmetry == ConditionStatus::Fail {
            return Err(reject(format!(
                "sigma - 1/2 is not odd (max deviation {})",
                report.max_symmetry_deviation
            )));
        }
        let closed_form = sigmoid
            .is_tanh()
            .then_some(tanh_closed_form::<T> as fn(T) -> T);
        Ok(Self {
            sigmoid,
            closed_form,
        })
    }

    pub fn by_name(name: &str) -> Result<Self> {
        Self::new(SigmoidSpec::by_name(name)?)
    }

    pub fn tanh() -> Self {
        Self::new(SigmoidSpec::tanh()).expect("tanh satisfies the kernel conditions")
    }

    pub fn logistic() -> Self {
        Self::new(SigmoidSpec::logistic()).expect("logistic satisfies the kernel conditions")
    }

    pub fn sigmoid(&self) -> &SigmoidSpec<T> {
        &self.sigmoid
    }

    pub fn name(&self) -> &str {
        self.sigmoid.name()
    }

    pub fn is_tanh(&self) -> bool {
        self.sigmoid.is_tanh()
    }

    /// `φ(t) = χ_σ(e^t)`.
    ///
    /// Uses `σ(y) = 1 − σ(−y)` to rewrite the difference in terms of the lower
    /// tail, so values far from the origin keep full relative precision and the
    /// result is exactly even.
    #[inline]
    pub fn eval_log(&self, t: T) -> T {
        let a = t.abs();
        let one = T::one();
        T::half() * (self.sigmoid.value(one - a) - self.sigmoid.value(-one - a))
    }

    /// `χ_σ(x)` for `x > 0`.
    pub fn eval_x(&self, x: T) -> Result<T> {
        check_positive(x, "kernel argument")?;
        Ok(self.eval_log(x.ln()))
    }

    /// Literal `½[σ(log x + 1) − σ(log x − 1)]`, without the tail rewrite.
    pub fn eval_definitional(&self, x: T) -> T {
        let l = x.ln();
        T::half() * (self.sigmoid.value(l + T::one()) - self.sigmoid.value(l - T::one()))
    }

    /// Closed-form evaluation when one is known (tanh only).
    pub fn closed_form(&self, x: T) -> Option<T> {
        self.closed_form.map(|f| f(x))
    }

    /// `χ_σ(e)`: the lower bound of the bounded-interval denominator.
    pub fn value_at_e(&self) -> T {
        self.eval_log(T::one())
    }

    /// `Σ_{k ≥ k_lo} φ(s − k)` in closed form via telescoping.
    pub fn mass_from(&self, s: T, k_lo: i64) -> T {
        let d = s - T::from_int(k_lo);
        T::half() * (self.sigmoid.value(d + T::one()) + self.sigmoid.value(d))
    }

    /// `Σ_{k ≤ k_hi} φ(s − k)` in closed form via telescoping.
    pub fn mass_to(&self, s: T, k_hi: i64) -> T {
        let d = T::from_int(k_hi) - s;
        T::half() * (self.sigmoid.value(d + T::one()) + self.sigmoid.value(d))
    }

    /// Kernel mass outside `[k_lo, k_hi]`, i.e. the truncation error of a
    /// partition sum restricted to that window.
    pub fn mass_outside(&self, s: T, k_lo: i64, k_hi: i64) -> T {
        self.mass_to(s, k_lo - 1) + self.mass_from(s, k_hi + 1)
    }

    /// Half-width `K` of a window `[round(s) − K, round(s) + K]` whose
    /// discarded kernel mass stays below `tol` for every `s`.
    pub fn default_truncation(&self, tol: T) -> usize {
        match self.sigmoid.tail() {
            TailClass::Exponential | TailClass::Compact { .. } => DEFAULT_TRUNCATION,
            TailClass::Polynomial { .. } => {
                // Worst case is a lattice offset of one half.
                let s = T::half();
                let mut k = DEFAULT_TRUNCATION;
                while k < MAX_TRUNCATION && self.mass_outside(s, -(k as i64), k as i64) >= tol {
                    k *= 2;
                }
                k
            }
        }
    }

    /// `Σ_k χ_σ(e^{-k} u)` over `k ∈ [round(log u) − K, round(log u) + K]`.
    pub fn partition_sum(&self, u: T, truncation: usize) -> Result<T> {
        check_positive(u, "u")?;
        let s = u.ln();
        let (lo, hi) = centered_window(s, truncation);
        Ok((lo..=hi)
            .map(|k| self.eval_log(s - T::from_int(k)))
            .collect::<CompensatedSum<T>>()
            .value())
    }

    /// `Σ_{k=⌈n log a⌉}^{⌊n log b⌋} χ_σ(e^{-k} x^n)`, the normalizer of the
    /// bounded-interval operator. Bounded below by `χ_σ(e)`.
    pub fn denominator_sum(&self, x: T, n: u32, a: T, b: T) -> Result<T> {
        check_interval(a, b)?;
        check_positive(x, "x")?;
        if x < a || x > b {
            return Err(Error::Domain(format!("x = {x} outside [{a}, {b}]")));
        }
        let scale = T::from_u32(n).unwrap();
        let (lo, hi) = index_range(scale, a, b)?;
        let s = scale * x.ln();
        Ok((lo..=hi)
            .map(|k| self.eval_log(s - T::from_int(k)))
            .collect::<CompensatedSum<T>>()
            .value())
    }

    /// Algebraic and absolute moments of order `order` at each `u` in `u_grid`.
    pub fn moments(&self, order: T, u_grid: &[T], truncation: usize) -> Result<MomentTable<T>> {
        if !(order >= T::zero()) || !order.is_finite() {
            return Err(Error::Domain(format!(
                "moment order must be non-negative, got {order}"
            )));
        }
        if truncation == 0 {
            return Err(Error::InvalidParameter(
                "truncation must be at least 1".into(),
            ));
        }
        if u_grid.is_empty() {
            return Err(Error::InvalidParameter("empty u grid".into()));
        }
        let mut algebraic = Vec::with_capacity(u_grid.len());
        let mut absolute = Vec::with_capacity(u_grid.len());
        let mut tail_estimate = T::zero();
        for &u in u_grid {
            check_positive(u, "u")?;
            let s = u.ln();
            let (lo, hi) = centered_window(s, truncation);
            let mut alg = CompensatedSum::new();
            let mut abs = CompensatedSum::new();
            for k in lo..=hi {
                let d = T::from_int(k) - s;
                let w = self.eval_log(d);
                alg.add(w * signed_power(d, order));
                abs.add(w * abs_power(d, order));
            }
            algebraic.push(alg.value());
            absolute.push(abs.value());

            // Mass of the next shell out, as an estimate of what was cut.
            let r = hi - truncation as i64;
            let shell: T = (1..=truncation as i64)
                .flat_map(|j| [r - truncation as i64 - j, r + truncation as i64 + j])
                .map(|k| {
                    let d = T::from_int(k) - s;
                    self.eval_log(d) * abs_power(d, order)
                })
                .fold(T::zero(), |acc, v| acc + v);
            tail_estimate = tail_estimate.max(shell);
        }
        let sup_absolute = absolute.iter().copied().fold(T::zero(), T::max);
        Ok(MomentTable {
            order,
            u: u_grid.to_vec(),
            algebraic,
            absolute,
            sup_absolute,
            truncation_k: truncation,
            tail_estimate,
        })
    }

    /// `M_ν(χ_σ) = sup_u M_ν(χ_σ, u)`, taken over one lattice period
    /// `u ∈ [1, e]` on a 1001-point grid.
    pub fn sup_absolute_moment(&self, order: T, truncation: usize) -> Result<T> {
        let grid: Vec<T> = (0..=1000)
            .map(|i| (T::from_usize(i).unwrap() / T::lit(1000.0)).exp())
            .collect();
        Ok(self.moments(order, &grid, truncation)?.sup_absolute)
    }

    /// `Σ_{|k − log u| > threshold} χ_σ(e^{-k} u)`.
    ///
    /// Terms within `K` of `round(log u)` are summed directly; the mass beyond
    /// that window is added in closed form.
    pub fn tail_mass(&self, u: T, threshold: T, truncation: usize) -> Result<T> {
        check_positive(u, "u")?;
        if !(threshold > T::zero()) {
            return Err(Error::Domain(format!(
                "threshold must be positive, got {threshold}"
            )));
        }
        let s = u.ln();
        let (lo, hi) = centered_window(s, truncation);
        let mut acc: CompensatedSum<T> = (lo..=hi)
            .filter(|&k| (T::from_int(k) - s).abs() > threshold)
            .map(|k| self.eval_log(s - T::from_int(k)))
            .collect();
        // Outside the window, keep only indices beyond the threshold.
        let below = (s - threshold).ceil().to_i64().unwrap() - 1;
        let above = (s + threshold).floor().to_i64().unwrap() + 1;
        acc.add(self.mass_to(s, below.min(lo - 1)));
        acc.add(self.mass_from(s, above.max(hi + 1)));
        Ok(acc.value())
    }
}

pub fn make_kernel<T: Scalar>(s: SigmoidSpec<T>) -> Result<DensityKernel<T>> {
    DensityKernel::new(s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable<T> {
    pub order: T,
    pub u: Vec<T>,
    /// `m_ν(χ_σ, u)`.
    pub algebraic: Vec<T>,
    /// `M_ν(χ_σ, u)`.
    pub absolute: Vec<T>,
    pub sup_absolute: T,
    pub truncation_k: usize,
    pub tail_estimate: T,
}

/// `d^ν` extended oddly to negative `d` for non-integer `ν`.
fn signed_power<T: Scalar>(d: T, order: T) -> T {
    if order == T::zero() {
        return T::one();
    }
    if order.fract() == T::zero() && order <= T::lit(64.0) {
        return d.powi(order.to_i32().unwrap());
    }
    if d == T::zero() {
        T::zero()
    } else {
        d.signum() * (order * d.abs().ln()).exp()
    }
}

fn abs_power<T: Scalar>(d: T, order: T) -> T {
    if order == T::zero() {
        return T::one();
    }
    let a = d.abs();
    if a == T::zero() {
        T::zero()
    } else {
        (order * a.ln()).exp()
    }
}

fn centered_window<T: Scalar>(s: T, truncation: usize) -> (i64, i64) {
    let r = s.round().to_i64().unwrap();
    (r - truncation as i64, r + truncation as i64)
}

pub(crate) fn check_positive<T: Scalar>(x: T, what: &str) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{what} must be positive and finite, got {x}"
        )))
    }
}

pub(crate) fn check_interval<T: Scalar>(a: T, b: T) -> Result<()> {
    check_positive(a, "a")?;
    check_positive(b, "b")?;
    if a < b {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "interval requires a < b, got [{a}, {b}]"
        )))
    }
}

/// Rounds values that are integers up to a few ulps onto that integer.
fn snap<T: Scalar>(v: T) -> T {
    let r = v.round();
    if (v - r).abs() <= T::lit(64.0) * T::epsilon() * v.abs().max(T::one()) {
        r
    } else {
        v
    }
}

/// Lattice index range `[⌈n log a⌉, ⌊n log b⌋]` of the bounded-interval operator.
pub fn index_range<T: Scalar>(scale: T, a: T, b: T) -> Result<(i64, i64)> {
    check_interval(a, b)?;
    let lo = snap(scale * a.ln()).ceil().to_i64().unwrap();
    let hi = snap(scale * b.ln()).floor().to_i64().unwrap();
    if lo > hi {
        return Err(Error::ScaleTooSmall {
            n: scale.as_f64(),
            lo,
            hi,
        });
    }
    Ok((lo, hi))
}

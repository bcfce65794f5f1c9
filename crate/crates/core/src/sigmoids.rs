//! Sigmoidal activations and numerical checks of the structural conditions
//! the kernel construction relies on:
//!
//! 1. `σ ∈ C²(ℝ)` and concave on `ℝ⁺`,
//! 2. `σ(x) = O(|x|^{-1-ν})` as `x → -∞`,
//! 3. `σ(x) - 1/2` is odd.

use std::fmt;
use std::sync::Arc;

use crate::analysis::rate::linear_fit;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Names of the built-in activations, as accepted by the CLI.
pub const CATALOGUE: [&str; 4] = ["logistic", "tanh", "bspline1", "bspline2"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    C2,
    C1,
    Piecewise,
}

/// How fast `σ(-x)` vanishes; drives default truncation windows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailClass<T> {
    Exponential,
    /// `σ(-x) = 0` for `x >= support`.
    Compact {
        support: T,
    },
    /// `σ(-x) ~ x^{-1-nu}`.
    Polynomial {
        nu: T,
    },
}

type SigmoidFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

#[derive(Clone)]
enum Rule<T> {
    Logistic,
    Tanh,
    BSpline1,
    BSpline2,
    Custom(SigmoidFn<T>),
}

/// A named sigmoidal activation. Immutable once built.
#[derive(Clone)]
pub struct SigmoidSpec<T> {
    name: String,
    rule: Rule<T>,
    decay_nu: T,
    smoothness: Smoothness,
    tail: TailClass<T>,
}

impl<T: fmt::Debug> fmt::Debug for SigmoidSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SigmoidSpec")
            .field("name", &self.name)
            .field("decay_nu", &self.decay_nu)
            .field("smoothness", &self.smoothness)
            .field("tail", &self.tail)
            .finish()
    }
}

#[inline]
fn logistic<T: Scalar>(x: T) -> T {
    // Branch on sign so the tail is computed without cancellation.
    if x >= T::zero() {
        T::one() / (T::one() + (-x).exp())
    } else {
        let e = x.exp();
        e / (T::one() + e)
    }
}

impl<T: Scalar> SigmoidSpec<T> {
    /// `σ_l(x) = 1 / (1 + e^{-x})`.
    pub fn logistic() -> Self {
        Self {
            name: "logistic".into(),
            rule: Rule::Logistic,
            decay_nu: T::one(),
            smoothness: Smoothness::C2,
            tail: TailClass::Exponential,
        }
    }

    /// `σ_h(x) = (tanh x + 1) / 2`.
    pub fn tanh() -> Self {
        Self {
            name: "tanh".into(),
            rule: Rule::Tanh,
            decay_nu: T::one(),
            smoothness: Smoothness::C2,
            tail: TailClass::Exponential,
        }
    }

    /// Ramp: integral of the order-1 centered B-spline.
    pub fn bspline1() -> Self {
        Self {
            name: "bspline1".into(),
            rule: Rule::BSpline1,
            decay_nu: T::one(),
            smoothness: Smoothness::Piecewise,
            tail: TailClass::Compact { support: T::half() },
        }
    }

    /// Integral of the order-2 centered B-spline (hat function).
    pub fn bspline2() -> Self {
        Self {
            name: "bspline2".into(),
            rule: Rule::BSpline2,
            decay_nu: T::one(),
            smoothness: Smoothness::C1,
            tail: TailClass::Compact { support: T::one() },
        }
    }

    /// User-registered activation.
    pub fn custom<F>(
        name: impl Into<String>,
        eval: F,
        decay_nu: T,
        smoothness: Smoothness,
        tail: TailClass<T>,
    ) -> Result<Self>
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        if !(decay_nu > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "decay exponent must be positive, got {decay_nu}"
            )));
        }
        Ok(Self {
            name: name.into(),
            rule: Rule::Custom(Arc::new(eval)),
            decay_nu,
            smoothness,
            tail,
        })
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "logistic" => Ok(Self::logistic()),
            "tanh" => Ok(Self::tanh()),
            "bspline1" => Ok(Self::bspline1()),
            "bspline2" => Ok(Self::bspline2()),
            other => Err(Error::Lookup(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn decay_nu(&self) -> T {
        self.decay_nu
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn tail(&self) -> TailClass<T> {
        self.tail
    }

    pub fn is_tanh(&self) -> bool {
        matches!(self.rule, Rule::Tanh)
    }

    /// Evaluates `σ(x)` without argument validation.
    #[inline]
    pub fn value(&self, x: T) -> T {
        match &self.rule {
            Rule::Logistic => logistic(x),
            // (tanh x + 1)/2 == 1/(1 + e^{-2x}); the logistic form keeps the tail accurate.
            Rule::Tanh => logistic(x + x),
            Rule::BSpline1 => {
                let h = T::half();
                if x < -h {
                    T::zero()
                } else if x > h {
                    T::one()
                } else {
                    x + h
                }
            }
            Rule::BSpline2 => {
                let one = T::one();
                if x <= -one {
                    T::zero()
                } else if x < T::zero() {
                    (one + x) * (one + x) * T::half()
                } else if x < one {
                    one - (x - one) * (x - one) * T::half()
                } else {
                    one
                }
            }
            Rule::Custom(f) => f(x),
        }
    }

    pub fn eval(&self, x: T) -> Result<T> {
        if !x.is_finite() {
            return Err(Error::Domain(format!(
                "sigmoid argument must be finite, got {x}"
            )));
        }
        Ok(self.value(x))
    }

    /// Numerically checks conditions (1)-(3) on grids of `samples` points
    /// extending to `grid_extent`.
    pub fn check_conditions(&self, grid_extent: T, samples: usize) -> Result<ConditionReport<T>> {
        if samples < 16 {
            return Err(Error::InvalidParameter(format!(
                "at least 16 samples required, got {samples}"
            )));
        }
        if !(grid_extent >= T::lit(4.0)) || !grid_extent.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid extent must be a finite value >= 4, got {grid_extent}"
            )));
        }
        let count = T::from_usize(samples).unwrap();
        let eps = T::epsilon();

        // (1) centered second differences on (0, extent].
        let h = T::lit(1e-4);
        let noise = T::lit(4.0) * eps / (h * h);
        let concavity_tol = T::lit(1e-8) + noise;
        let max_second_difference = (1..=samples)
            .map(|i| {
                let x = grid_extent * T::from_usize(i).unwrap() / count;
                (self.value(x + h) - (self.value(x) + self.value(x)) + self.value(x - h)) / (h * h)
            })
            .fold(T::neg_infinity(), T::max);
        let condition_1_c2_concave = match self.smoothness {
            Smoothness::C2 if max_second_difference <= concavity_tol => ConditionStatus::Pass,
            Smoothness::C2 => ConditionStatus::Fail,
            Smoothness::C1 | Smoothness::Piecewise => ConditionStatus::NotApplicable,
        };

        // (2) log-log slope of σ(-x) over [extent/2, extent].
        let lo = grid_extent * T::half();
        let (log_x, log_s): (Vec<T>, Vec<T>) = (0..samples)
            .map(|i| lo + (grid_extent - lo) * T::from_usize(i).unwrap() / (count - T::one()))
            .filter_map(|x| {
                let s = self.value(-x);
                (s > T::zero()).then(|| (x.ln(), s.ln()))
            })
            .unzip();
        let fitted_decay_slope = if log_x.len() < 2 {
            // σ(-x) vanishes identically on the window: faster than any power.
            T::neg_infinity()
        } else {
            linear_fit(&log_x, &log_s).0
        };
        let slope_limit = -(T::one() + self.decay_nu) + T::lit(0.1);
        let condition_2_decay = if fitted_decay_slope <= slope_limit {
            ConditionStatus::Pass
        } else {
            ConditionStatus::Fail
        };

        // (3) max |σ(x) + σ(-x) - 1| on [-extent, extent].
        let max_symmetry_deviation = (0..=samples)
            .map(|i| {
                let x =
                    -grid_extent + (grid_extent + grid_extent) * T::from_usize(i).unwrap() / count;
                (self.value(x) + self.value(-x) - T::one()).abs()
            })
            .fold(T::zero(), T::max);
        let symmetry_tol = T::lit(1e-12).max(T::lit(16.0) * eps);
        let condition_3_odd_symmetry = if max_symmetry_deviation <= symmetry_tol {
            ConditionStatus::Pass
        } else {
            ConditionStatus::Fail
        };

        let overall = [
            condition_1_c2_concave,
            condition_2_decay,
            condition_3_odd_symmetry,
        ]
        .iter()
        .all(|c| *c != ConditionStatus::Fail);

        Ok(ConditionReport {
            condition_1_c2_concave,
            max_second_difference,
            condition_2_decay,
            fitted_decay_slope,
            condition_3_odd_symmetry,
            max_symmetry_deviation,
            overall,
        })
    }
}

pub fn eval_sigmoid<T: Scalar>(s: &SigmoidSpec<T>, x: T) -> Result<T> {
    s.eval(x)
}

pub fn check_conditions<T: Scalar>(
    s: &SigmoidSpec<T>,
    grid_extent: T,
    samples: usize,
) -> Result<ConditionReport<T>> {
    s.check_conditions(grid_extent, samples)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionStatus {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for ConditionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConditionStatus::Pass => "pass",
            ConditionStatus::Fail => "fail",
            ConditionStatus::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionReport<T> {
    pub condition_1_c2_concave: ConditionStatus,
    /// Largest normalized second difference seen on `(0, extent]`; positive means locally convex.
    pub max_second_difference: T,
    pub condition_2_decay: ConditionStatus,
    pub fitted_decay_slope: T,
    pub condition_3_odd_symmetry: ConditionStatus,
    pub max_symmetry_deviation: T,
    pub overall: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalogue() -> Vec<SigmoidSpec<f64>> {
        CATALOGUE
            .iter()
            .map(|n| SigmoidSpec::by_name(n).unwrap())
            .collect()
    }

    #[test]
    fn catalogue_point_values() {
        assert_eq!(SigmoidSpec::<f64>::logistic().eval(0.0).unwrap(), 0.5);
        assert_eq!(SigmoidSpec::<f64>::bspline1().eval(0.0).unwrap(), 0.5);
        assert_eq!(SigmoidSpec::<f64>::bspline2().eval(0.0).unwrap(), 0.5);
        // mpmath, 40 digits: (tanh 2 + 1)/2
        let v = SigmoidSpec::<f64>::tanh().eval(2.0).unwrap();
        assert!((v - 0.982_013_790_037_908_4).abs() < 1e-15);
    }

    #[test]
    fn non_finite_argument_is_rejected() {
        let s = SigmoidSpec::<f64>::tanh();
        assert!(matches!(s.eval(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(s.eval(f64::INFINITY), Err(Error::Domain(_))));
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(
            SigmoidSpec::<f64>::by_name("relu"),
            Err(Error::Lookup(_))
        ));
    }

    #[test]
    fn monotone_limits_and_step() {
        for s in catalogue() {
            let mut prev = f64::NEG_INFINITY;
            for i in 0..=2000 {
                let x = -20.0 + 40.0 * i as f64 / 2000.0;
                let v = s.value(x);
                assert!(v >= prev, "{} not monotone at {x}", s.name());
                assert!((0.0..=1.0).contains(&v));
                prev = v;
            }
            assert!(s.value(-60.0) < 1e-20);
            assert!((1.0 - s.value(60.0)) < 1e-15);
            assert!(s.value(2.0) > s.value(0.0));
        }
    }

    #[test]
    fn odd_symmetry_residual() {
        for s in catalogue() {
            for i in 0..=4000 {
                let x = -20.0 + 40.0 * i as f64 / 4000.0;
                assert!((s.value(x) + s.value(-x) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tanh_satisfies_all_conditions() {
        let r = SigmoidSpec::<f64>::tanh()
            .check_conditions(10.0, 1000)
            .unwrap();
        assert_eq!(r.condition_1_c2_concave, ConditionStatus::Pass);
        assert_eq!(r.condition_2_decay, ConditionStatus::Pass);
        assert_eq!(r.condition_3_odd_symmetry, ConditionStatus::Pass);
        assert!(r.overall);
    }

    #[test]
    fn logistic_symmetry_is_tight() {
        let r = SigmoidSpec::<f64>::logistic()
            .check_conditions(10.0, 1000)
            .unwrap();
        assert!(r.max_symmetry_deviation < 1e-12);
        assert!(r.overall);
    }

    #[test]
    fn ramp_flags_condition_one() {
        let r = SigmoidSpec::<f64>::bspline1()
            .check_conditions(10.0, 1000)
            .unwrap();
        assert_eq!(r.condition_1_c2_concave, ConditionStatus::NotApplicable);
        assert_eq!(r.condition_2_decay, ConditionStatus::Pass);
        assert_eq!(r.condition_3_odd_symmetry, ConditionStatus::Pass);
        assert!(r.fitted_decay_slope.is_infinite());
    }

    #[test]
    fn convex_and_slow_custom_sigmoids_fail() {
        // Cauchy-type CDF: decays like 1/|x|, slower than |x|^{-2}.
        let slow = SigmoidSpec::custom(
            "arctan",
            |x: f64| 0.5 + x.atan() / std::f64::consts::PI,
            1.0,
            Smoothness::C2,
            TailClass::Polynomial { nu: 0.0 },
        )
        .unwrap();
        let r = slow.check_conditions(40.0, 200).unwrap();
        assert_eq!(r.condition_2_decay, ConditionStatus::Fail);
        assert!((r.fitted_decay_slope + 1.0).abs() < 0.05);

        // Shifted logistic: not symmetric about the origin.
        let shifted = SigmoidSpec::custom(
            "shifted",
            |x: f64| 1.0 / (1.0 + (-(x - 1.0)).exp()),
            1.0,
            Smoothness::C2,
            TailClass::Exponential,
        )
        .unwrap();
        let r = shifted.check_conditions(10.0, 200).unwrap();
        assert_eq!(r.condition_3_odd_symmetry, ConditionStatus::Fail);
        // Convex on (0, 1) since the inflection point moved right.
        assert_eq!(r.condition_1_c2_concave, ConditionStatus::Fail);
        assert!(!r.overall);
    }

    #[test]
    fn parameter_validation() {
        let s = SigmoidSpec::<f64>::tanh();
        assert!(s.check_conditions(3.0, 100).is_err());
        assert!(s.check_conditions(10.0, 8).is_err());
        assert!(
            SigmoidSpec::custom("x", |x: f64| x, 0.0, Smoothness::C2, TailClass::Exponential)
                .is_err()
        );
    }

    #[test]
    fn single_precision_catalogue() {
        let s = SigmoidSpec::<f32>::tanh();
        assert!((s.eval(2.0).unwrap() - 0.982_013_8).abs() < 1e-6);
        let r = s.check_conditions(10.0, 200).unwrap();
        assert!(r.overall);
    }
}

//! Exponential-sampling neural network operators.
//!
//! Sigmoidal activations generate a bell-shaped density kernel
//! `χ_σ(x) = ½[σ(log x + 1) − σ(log x − 1)]` on `ℝ⁺`. The operators built on
//! it sample a target function at the nodes `e^{k/n}`:
//!
//! * `E_n` ([`BoundedOperator`]): normalized finite sum over `[a, b]`,
//! * `Q_n` ([`QuasiOperator`]): un-normalized bi-infinite series,
//! * `S_w` ([`SamplingOperator`]): the same series with a real scale,
//! * multivariate `E_n` on boxes ([`MultivariateOperator`]).
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases at the
//! crate root fix `f64`.

// NaN-rejecting guards are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod density;
pub mod error;
pub mod function;
pub mod operators;
pub mod registry;
pub mod scalar;
pub mod sigmoids;

pub use density::{index_range, make_kernel, DensityKernel, MomentTable};
pub use error::{Error, Result};
pub use function::{FunctionHandle, FunctionTags, MultiFunctionHandle};
pub use operators::{
    nn_eval, nn_eval_multi, BoundedOperator, MultivariateOperator, OperatorConfig, OperatorFamily,
    QuasiOperator, SamplingOperator, SeriesValue,
};
pub use registry::RegistryEntry;
pub use scalar::{log_grid, Scalar};
pub use sigmoids::{
    check_conditions, eval_sigmoid, ConditionReport, ConditionStatus, SigmoidSpec, Smoothness,
    TailClass,
};

pub type Sigmoid = SigmoidSpec<f64>;
pub type Kernel = DensityKernel<f64>;
pub type Function = FunctionHandle<f64>;
pub type MultiFunction = MultiFunctionHandle<f64>;
pub type Config = OperatorConfig<f64>;
pub type Entry = RegistryEntry<f64>;
pub type Report = analysis::BoundReport<f64>;

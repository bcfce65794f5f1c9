//! Error analysis: moduli of continuity, Mellin derivatives, quantitative
//! bounds and empirical rate fitting.

pub mod bounds;
pub mod measure;
pub mod mellin;
pub mod modulus;
pub mod rate;

pub use bounds::{
    bound_theorem2, bound_theorem3, bound_theorem4, bound_theorem6, theorem2_bound, theorem3_bound,
    theorem4_bound, theorem6_bound, BoundOptions, BoundReport, Theorem, Theorem4Inputs,
};
pub use measure::ErrorProfile;
pub use mellin::{mellin_derivative, mellin_taylor, MellinDerivative, MellinTaylor};
pub use modulus::{log_modulus, log_modulus_of, ModulusEstimate};
pub use rate::{fit_rate, RateFit};

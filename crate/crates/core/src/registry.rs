//! Fixed catalogue of test functions with known analytic data.

use std::fmt;
use std::sync::Arc;

use crate::analysis::bounds::Theorem4Inputs;
use crate::analysis::modulus::{log_modulus_of, modulus_grid_for};
use crate::error::{Error, Result};
use crate::function::{FunctionHandle, FunctionTags};
use crate::scalar::{log_grid, Scalar};

const NAMES: [&str; 7] = [
    "const5",
    "logx",
    "runge_log",
    "sinlog",
    "sq_log",
    "sqrtlog_holder",
    "step_log",
];

type Closed<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

#[derive(Clone)]
pub struct RegistryEntry<T> {
    pub handle: FunctionHandle<T>,
    /// Closed form of `θf(x) = x f′(x)`.
    pub analytic_theta1: Option<Closed<T>>,
    /// Closed form of `θ²f`.
    pub analytic_theta2: Option<Closed<T>>,
    /// `(λ, H)` with `|f(x) − f(y)| ≤ H |log x − log y|^λ` on the domain.
    pub known_holder: Option<(T, T)>,
    pub notes: &'static str,
}

impl<T: Scalar> fmt::Debug for RegistryEntry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RegistryEntry")
            .field("handle", &self.handle)
            .field("analytic_theta1", &self.analytic_theta1.is_some())
            .field("analytic_theta2", &self.analytic_theta2.is_some())
            .field("known_holder", &self.known_holder)
            .field("notes", &self.notes)
            .finish()
    }
}

impl<T: Scalar> RegistryEntry<T> {
    pub fn name(&self) -> &str {
        self.handle.name()
    }

    pub fn theta1(&self, x: T) -> Option<T> {
        self.analytic_theta1.as_ref().map(|g| g(x))
    }

    pub fn theta2(&self, x: T) -> Option<T> {
        self.analytic_theta2.as_ref().map(|g| g(x))
    }

    /// Mellin–Taylor bound inputs from the closed-form derivatives, measured
    /// on `grid` points of the domain and multiplied by `safety`.
    pub fn analytic_theorem4_inputs(
        &self,
        n: u32,
        nu: T,
        grid: usize,
        safety: T,
    ) -> Option<Result<Theorem4Inputs<T>>> {
        let t1 = self.analytic_theta1.as_ref()?;
        let t2 = self.analytic_theta2.as_ref()?;
        let (a, b) = self.handle.domain();
        let sup = |g: &Closed<T>| {
            log_grid(a, b, grid)
                .into_iter()
                .fold(T::zero(), |m, x| m.max(g(x).abs()))
        };
        let delta = T::from_u32(n).unwrap().powf(-nu);
        Some(
            log_modulus_of(|x| t2(x), a, b, delta, modulus_grid_for(a, b, delta, grid)).map(
                |omega| Theorem4Inputs {
                    theta1_norm: safety * sup(t1),
                    theta2_norm: safety * sup(t2),
                    omega_theta2: safety * omega.value,
                    b_minus_a: b - a,
                },
            ),
        )
    }
}

/// Registered names in alphabetical order.
pub fn list() -> Vec<&'static str> {
    let mut names = NAMES.to_vec();
    names.sort_unstable();
    names
}

fn closed<T: Scalar>(g: impl Fn(T) -> T + Send + Sync + 'static) -> Option<Closed<T>> {
    Some(Arc::new(g))
}

fn smooth<T: Scalar>(holder: (T, T), bounded: bool) -> FunctionTags<T> {
    FunctionTags {
        bounded,
        continuous: true,
        log_holder: Some(holder),
        c2: true,
        cn: None,
    }
}

pub fn get<T: Scalar>(name: &str) -> Result<RegistryEntry<T>> {
    let one = T::one();
    let e = T::E();
    let e2 = e * e;
    let two = T::lit(2.0);
    let entry = match name {
        "const5" => {
            let holder = (one, T::zero());
            RegistryEntry {
                handle: FunctionHandle::new(name, (one, e2), |_| T::lit(5.0))?
                    .with_tags(smooth(holder, true))
                    .with_global_sup(T::lit(5.0)),
                analytic_theta1: closed(|_| T::zero()),
                analytic_theta2: closed(|_| T::zero()),
                known_holder: Some(holder),
                notes: "constant; reproduced exactly by E_n",
            }
        }
        "logx" => {
            let holder = (one, one);
            RegistryEntry {
                handle: FunctionHandle::new(name, (one, e2), |x: T| x.ln())?
                    .with_tags(smooth(holder, false)),
                analytic_theta1: closed(|_| T::one()),
                analytic_theta2: closed(|_| T::zero()),
                known_holder: Some(holder),
                notes: "linear in log x; unbounded on the half-line",
            }
        }
        "sq_log" => {
            let holder = (one, two);
            RegistryEntry {
                handle: FunctionHandle::new(name, (one, e), |x: T| x.ln() * x.ln())?
                    .with_tags(smooth(holder, false)),
                analytic_theta1: closed(|x: T| T::lit(2.0) * x.ln()),
                analytic_theta2: closed(|_| T::lit(2.0)),
                known_holder: Some(holder),
                notes: "quadratic in log x",
            }
        }
        "sinlog" => {
            let holder = (one, one);
            RegistryEntry {
                handle: FunctionHandle::new(name, (one, e2), |x: T| x.ln().sin() + T::lit(2.0))?
                    .with_tags(smooth(holder, true))
                    .with_global_sup(T::lit(3.0)),
                analytic_theta1: closed(|x: T| x.ln().cos()),
                analytic_theta2: closed(|x: T| -x.ln().sin()),
                known_holder: Some(holder),
                notes: "smooth, bounded, oscillating in log x",
            }
        }
        "runge_log" => {
            // sup |g′| for g(t) = 1/(1 + t²) is attained at t = 1/√3
            let holder = (one, T::lit(3.0) * T::lit(3.0).sqrt() / T::lit(8.0));
            RegistryEntry {
                handle: FunctionHandle::new(name, (T::half(), two), |x: T| {
                    let t = x.ln();
                    T::one() / (T::one() + t * t)
                })?
                .with_tags(smooth(holder, true))
                .with_global_sup(one),
                analytic_theta1: closed(|x: T| {
                    let t = x.ln();
                    let d = T::one() + t * t;
                    -T::lit(2.0) * t / (d * d)
                }),
                analytic_theta2: closed(|x: T| {
                    let t = x.ln();
                    let d = T::one() + t * t;
                    (T::lit(6.0) * t * t - T::lit(2.0)) / (d * d * d)
                }),
                known_holder: Some(holder),
                notes: "Runge bump in log x",
            }
        }
        "sqrtlog_holder" => {
            let holder = (T::half(), one);
            RegistryEntry {
                handle: FunctionHandle::new(name, (one / e, e), |x: T| x.ln().abs().sqrt())?
                    .with_tags(FunctionTags {
                        bounded: false,
                        continuous: true,
                        log_holder: Some(holder),
                        c2: false,
                        cn: Some(0),
                    }),
                analytic_theta1: None,
                analytic_theta2: None,
                known_holder: Some(holder),
                notes: "log-Hölder of order 1/2 at x = 1, not differentiable there",
            }
        }
        "step_log" => RegistryEntry {
            handle: FunctionHandle::new(name, (one, e2), |x: T| {
                if x >= T::E() {
                    T::one()
                } else {
                    T::zero()
                }
            })?
            .with_tags(FunctionTags {
                bounded: true,
                ..FunctionTags::default()
            })
            .with_global_sup(one),
            analytic_theta1: None,
            analytic_theta2: None,
            known_holder: None,
            notes: "jump at x = e; convergence only at continuity points",
        },
        _ => return Err(Error::Lookup(name.to_string())),
    };
    Ok(entry)
}

//! Target functions on the positive half-line (or a box in `(ℝ⁺)^N`).

use std::fmt;
use std::sync::Arc;

use crate::density::check_interval;
use crate::error::{Error, Result};
use crate::scalar::{log_grid, Scalar};

/// Regularity metadata attached to a target function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FunctionTags<T> {
    /// Bounded on all of `ℝ⁺`, not just on the declared domain.
    pub bounded: bool,
    pub continuous: bool,
    /// `|f(x) − f(y)| ≤ H |log x − log y|^λ` on the domain, stored as `(λ, H)`.
    pub log_holder: Option<(T, T)>,
    pub c2: bool,
    /// Largest `N` with `f ∈ C^N`, when known.
    pub cn: Option<u32>,
}

impl<T> Default for FunctionTags<T> {
    fn default() -> Self {
        Self {
            bounded: false,
            continuous: false,
            log_holder: None,
            c2: false,
            cn: None,
        }
    }
}

type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

#[derive(Clone)]
pub struct FunctionHandle<T> {
    name: String,
    eval: ScalarFn<T>,
    domain: (T, T),
    tags: FunctionTags<T>,
    global_sup: Option<T>,
}

impl<T: Scalar> fmt::Debug for FunctionHandle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("tags", &self.tags)
            .field("global_sup", &self.global_sup)
            .finish()
    }
}

impl<T: Scalar> FunctionHandle<T> {
    /// Wraps `eval` with working domain `[a, b]`. The function must be finite
    /// on a 1000-point log grid of the domain.
    pub fn new<F>(name: impl Into<String>, domain: (T, T), eval: F) -> Result<Self>
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        check_interval(domain.0, domain.1)?;
        let name = name.into();
        for x in log_grid(domain.0, domain.1, 1000) {
            if !eval(x).is_finite() {
                return Err(Error::Evaluation {
                    name,
                    x: x.as_f64(),
                });
            }
        }
        Ok(Self {
            name,
            eval: Arc::new(eval),
            domain,
            tags: FunctionTags::default(),
            global_sup: None,
        })
    }

    pub fn with_tags(mut self, tags: FunctionTags<T>) -> Self {
        self.tags = tags;
        self
    }

    /// Records `sup_{x > 0} |f(x)|`.
    pub fn with_global_sup(mut self, sup: T) -> Self {
        self.global_sup = Some(sup);
        self
    }

    /// Same function on a different working domain.
    pub fn on_domain(&self, a: T, b: T) -> Result<Self> {
        check_interval(a, b)?;
        Ok(Self {
            domain: (a, b),
            ..self.clone()
        })
    }

    #[inline]
    pub fn eval(&self, x: T) -> T {
        (self.eval)(x)
    }

    /// Evaluates and rejects non-finite results.
    pub fn try_eval(&self, x: T) -> Result<T> {
        let v = self.eval(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation {
                name: self.name.clone(),
                x: x.as_f64(),
            })
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> (T, T) {
        self.domain
    }

    pub fn tags(&self) -> &FunctionTags<T> {
        &self.tags
    }

    pub fn global_sup(&self) -> Option<T> {
        self.global_sup
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.domain.0 && x <= self.domain.1
    }
}

type VectorFn<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;

/// Target function on a box `Π [a_i, b_i] ⊂ (ℝ⁺)^N`.
#[derive(Clone)]
pub struct MultiFunctionHandle<T> {
    name: String,
    eval: VectorFn<T>,
    domain: Vec<(T, T)>,
}

impl<T: Scalar> fmt::Debug for MultiFunctionHandle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiFunctionHandle")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .finish()
    }
}

impl<T: Scalar> MultiFunctionHandle<T> {
    pub fn new<F>(name: impl Into<String>, domain: Vec<(T, T)>, eval: F) -> Result<Self>
    where
        F: Fn(&[T]) -> T + Send + Sync + 'static,
    {
        if domain.is_empty() {
            return Err(Error::InvalidParameter(
                "box must have at least one axis".into(),
            ));
        }
        for &(a, b) in &domain {
            check_interval(a, b)?;
        }
        Ok(Self {
            name: name.into(),
            eval: Arc::new(eval),
            domain,
        })
    }

    /// `F(x) = Π_i f(x_i)` on the box `[a, b]^dim`.
    pub fn product(f: &FunctionHandle<T>, dim: usize) -> Result<Self> {
        let g = f.clone();
        Self::new(
            format!("{}^{dim}", f.name()),
            vec![f.domain(); dim],
            move |x: &[T]| x.iter().fold(T::one(), |acc, &xi| acc * g.eval(xi)),
        )
    }

    #[inline]
    pub fn eval(&self, x: &[T]) -> T {
        (self.eval)(x)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &[(T, T)] {
        &self.domain
    }

    pub fn dimension(&self) -> usize {
        self.domain.len()
    }
}

//! Mellin derivatives `θf(x) = x f'(x)` and their iterates, computed in log
//! coordinates where `θ^{(r)} f(x) = g^{(r)}(log x)` with `g(t) = f(e^t)`.

use crate::error::{Error, Result};
use crate::function::FunctionHandle;
use crate::scalar::{CompensatedSum, Scalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MellinDerivative<T> {
    pub order: u32,
    pub at: T,
    pub value: T,
    pub step: T,
}

/// Log-domain step used for a centered stencil of the given order.
pub fn step_for_order<T: Scalar>(order: u32) -> T {
    T::lit(match order {
        1 => 6e-6,
        2 => 1e-4,
        3 => 1e-3,
        _ => 2e-3,
    })
}

/// Half-width of the stencil in units of the step.
fn stencil_reach(order: u32) -> i32 {
    if order <= 2 {
        1
    } else {
        2
    }
}

/// `g^{(order)}(t)` by centered differences with step `h`.
pub(crate) fn centered_difference<T: Scalar, G: Fn(T) -> T>(g: &G, t: T, order: u32, h: T) -> T {
    let two = T::lit(2.0);
    match order {
        1 => (g(t + h) - g(t - h)) / (two * h),
        2 => (g(t + h) - two * g(t) + g(t - h)) / (h * h),
        3 => {
            (g(t + two * h) - two * g(t + h) + two * g(t - h) - g(t - two * h)) / (two * h * h * h)
        }
        _ => {
            let four = T::lit(4.0);
            (g(t + two * h) - four * g(t + h) + T::lit(6.0) * g(t) - four * g(t - h)
                + g(t - two * h))
                / (h * h * h * h)
        }
    }
}

fn check_order(order: u32) -> Result<()> {
    if (1..=4).contains(&order) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "Mellin derivative order must be in 1..=4, got {order}"
        )))
    }
}

/// `θ^{(order)} f(x)` for `x` strictly inside the function's domain.
pub fn mellin_derivative<T: Scalar>(
    f: &FunctionHandle<T>,
    x: T,
    order: u32,
) -> Result<MellinDerivative<T>> {
    check_order(order)?;
    let (a, b) = f.domain();
    let step = step_for_order::<T>(order);
    let t = x.ln();
    let reach = step * T::from_i32(stencil_reach(order)).unwrap();
    if !(x > T::zero()) || t - reach < a.ln() || t + reach > b.ln() {
        return Err(Error::Stencil {
            order,
            x: x.as_f64(),
            lo: a.as_f64(),
            hi: b.as_f64(),
        });
    }
    let g = |t: T| f.eval(t.exp());
    Ok(MellinDerivative {
        order,
        at: x,
        value: centered_difference(&g, t, order, step),
        step,
    })
}

/// Closure evaluating `θ^{(order)} f` by finite differences, without domain checks.
pub fn mellin_fd<T: Scalar>(f: &FunctionHandle<T>, order: u32) -> impl Fn(T) -> T + '_ {
    let step = step_for_order::<T>(order);
    move |x: T| centered_difference(&|t: T| f.eval(t.exp()), x.ln(), order, step)
}

/// Largest interval inside the domain on which the order-`order` stencil fits.
pub fn stencil_interior<T: Scalar>(f: &FunctionHandle<T>, order: u32) -> (T, T) {
    let (a, b) = f.domain();
    let reach = step_for_order::<T>(order) * T::from_i32(stencil_reach(order) + 1).unwrap();
    (a * reach.exp(), b * (-reach).exp())
}

/// Mellin–Taylor expansion of `f(e^u)` about `x`:
/// `Σ_{i<N} θ^{(i)}f(x)/i! (u − log x)^i` plus the integral remainder
/// `∫_{log x}^{u} θ^{(N)}f(e^ξ) (u − ξ)^{N−1}/(N−1)! dξ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MellinTaylor<T> {
    pub polynomial: T,
    pub remainder: T,
}

impl<T: Scalar> MellinTaylor<T> {
    pub fn total(&self) -> T {
        self.polynomial + self.remainder
    }
}

/// Builds the order-`order` expansion from callables for `θ^{(i)} f`,
/// `i = 0..=order` (index 0 is `f` itself). The remainder uses composite
/// Simpson quadrature with `panels` (rounded up to even) sub-intervals.
pub fn mellin_taylor_with<T: Scalar>(
    derivatives: &[&dyn Fn(T) -> T],
    x: T,
    u: T,
    panels: usize,
) -> Result<MellinTaylor<T>> {
    let order = derivatives
        .len()
        .checked_sub(1)
        .filter(|&n| n >= 1)
        .ok_or_else(|| {
            Error::InvalidParameter("need f and at least one Mellin derivative".into())
        })?;
    let t0 = x.ln();
    let d = u - t0;
    let mut polynomial = CompensatedSum::new();
    let mut factorial = T::one();
    let mut power = T::one();
    for (i, theta) in derivatives[..order].iter().enumerate() {
        if i > 0 {
            factorial = factorial * T::from_usize(i).unwrap();
            power = power * d;
        }
        polynomial.add(theta(x) * power / factorial);
    }
    let last = derivatives[order];
    let panels = (panels.max(2) + 1) & !1;
    let h = d / T::from_usize(panels).unwrap();
    let fact_nm1 = (1..order).fold(T::one(), |acc, i| acc * T::from_usize(i).unwrap());
    let integrand = |xi: T| last(xi.exp()) * (u - xi).powi(order as i32 - 1) / fact_nm1;
    let mut acc = CompensatedSum::new();
    for i in 0..=panels {
        let w = if i == 0 || i == panels {
            T::one()
        } else if i % 2 == 1 {
            T::lit(4.0)
        } else {
            T::lit(2.0)
        };
        acc.add(w * integrand(t0 + h * T::from_usize(i).unwrap()));
    }
    Ok(MellinTaylor {
        polynomial: polynomial.value(),
        remainder: acc.value() * h / T::lit(3.0),
    })
}

/// Expansion of order `order ∈ 1..=4` using finite-difference Mellin derivatives.
pub fn mellin_taylor<T: Scalar>(
    f: &FunctionHandle<T>,
    x: T,
    u: T,
    order: u32,
) -> Result<MellinTaylor<T>> {
    check_order(order)?;
    let fd: Vec<Box<dyn Fn(T) -> T + '_>> =
        std::iter::once(Box::new(|x: T| f.eval(x)) as Box<dyn Fn(T) -> T>)
            .chain((1..=order).map(|r| Box::new(mellin_fd(f, r)) as Box<dyn Fn(T) -> T>))
            .collect();
    let refs: Vec<&dyn Fn(T) -> T> = fd.iter().map(|b| b.as_ref()).collect();
    mellin_taylor_with(&refs, x, u, 400)
}

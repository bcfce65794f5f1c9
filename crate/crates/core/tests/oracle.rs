//! Operators checked against sums written out directly from the definitions.

use std::f64::consts::E;

use expnn::{log_grid, BoundedOperator, FunctionHandle, Kernel, QuasiOperator};

/// Double-double accumulator.
#[derive(Default)]
struct TwoSum {
    hi: f64,
    lo: f64,
}

impl TwoSum {
    fn add(&mut self, x: f64) {
        let s = self.hi + x;
        let bp = s - self.hi;
        self.lo += (self.hi - (s - bp)) + (x - bp);
        self.hi = s;
    }

    fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

fn logistic(t: f64) -> f64 {
    1.0 / (1.0 + (-t).exp())
}

fn chi(sigma: fn(f64) -> f64, y: f64) -> f64 {
    0.5 * (sigma(y.ln() + 1.0) - sigma(y.ln() - 1.0))
}

#[test]
fn bounded_operator_matches_direct_sum() {
    let f = FunctionHandle::new("mix", (1.0, E * E), |x: f64| x.ln().cos() + 0.1 * x).unwrap();
    let kernel = Kernel::logistic();
    for n in [1u32, 2, 4, 7] {
        let op = BoundedOperator::new(&kernel, &f, n).unwrap();
        for x in log_grid(1.0f64, E * E, 61) {
            let (mut num, mut den) = (TwoSum::default(), TwoSum::default());
            for k in 0..=(2 * n as i64) {
                let w = chi(logistic, (-(k as f64)).exp() * x.powi(n as i32));
                num.add(f.eval((k as f64 / f64::from(n)).exp()) * w);
                den.add(w);
            }
            let direct = num.value() / den.value();
            assert!(
                (op.eval(x).unwrap() - direct).abs() < 1e-12,
                "n = {n}, x = {x}"
            );
        }
    }
}

#[test]
fn quasi_operator_matches_direct_sum() {
    let f = FunctionHandle::new("bump", (0.5, 2.0), |x: f64| 1.0 / (1.0 + x.ln().powi(2)))
        .unwrap()
        .with_global_sup(1.0);
    let kernel = Kernel::tanh();
    let sigma = |t: f64| 0.5 * (t.tanh() + 1.0);
    for n in [1u32, 3] {
        let op = QuasiOperator::new(&kernel, &f, n, 40, (0.5, 2.0)).unwrap();
        for x in log_grid(0.5f64, 2.0, 31) {
            let s = f64::from(n) * x.ln();
            let mut acc = TwoSum::default();
            for k in (s.round() as i64 - 40)..=(s.round() as i64 + 40) {
                let t = s - k as f64;
                if t.abs() > 40.0 {
                    continue;
                }
                let w = 0.5 * (sigma(t + 1.0) - sigma(t - 1.0));
                acc.add(f.eval((k as f64 / f64::from(n)).exp()) * w);
            }
            let v = op.eval(x).unwrap();
            assert!((v.value - acc.value()).abs() < 1e-13, "n = {n}, x = {x}");
            assert!(v.tail_estimate < 1e-30);
        }
    }
}

#[test]
fn single_precision_tracks_double() {
    let f64_op = {
        let f = FunctionHandle::new("sinlog", (1.0, E * E), |x: f64| x.ln().sin() + 2.0).unwrap();
        let k = Kernel::tanh();
        BoundedOperator::new(&k, &f, 20).unwrap().eval(3.0).unwrap()
    };
    let f = FunctionHandle::<f32>::new("sinlog", (1.0, std::f32::consts::E.powi(2)), |x: f32| {
        x.ln().sin() + 2.0
    })
    .unwrap();
    let k = expnn::DensityKernel::<f32>::tanh();
    let v = BoundedOperator::new(&k, &f, 20).unwrap().eval(3.0).unwrap();
    assert!((f64::from(v) - f64_op).abs() < 1e-5);
}

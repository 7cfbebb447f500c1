#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;
use specint::chebyshev::Endpoint;
use specint::factored::{BoundaryCondition, OperatorFactorization};
use specint::integration::{FirstOrderOp, SecondOrderOp};

/// `u = sin(ωy + φ)`.
#[derive(Debug, Clone, Copy)]
pub struct Wave {
    pub omega: f64,
    pub phase: f64,
}

impl Wave {
    pub fn derivative(&self, k: usize, y: f64) -> f64 {
        self.omega.powi(k as i32) * (self.omega * y + self.phase + k as f64 * FRAC_PI_2).sin()
    }

    pub fn eval(&self, y: f64) -> f64 {
        self.derivative(0, y)
    }

    /// `Σ p_k u^(k)` for an ascending coefficient list.
    pub fn apply(&self, poly: &[f64], y: f64) -> f64 {
        poly.iter().enumerate().map(|(k, p)| p * self.derivative(k, y)).sum()
    }

    /// The first `⌈r/2⌉` derivatives pinned on the left, the rest on the right.
    pub fn conditions(&self, r: usize, left: f64, right: f64) -> Vec<BoundaryCondition> {
        let nl = r - r / 2;
        let mut bcs = Vec::new();
        for d in 0..nl {
            bcs.push(BoundaryCondition::derivative(Endpoint::Left, d, self.derivative(d, left)).unwrap());
        }
        for d in 0..r / 2 {
            bcs.push(BoundaryCondition::derivative(Endpoint::Right, d, self.derivative(d, right)).unwrap());
        }
        bcs
    }
}

pub fn wave() -> impl Strategy<Value = Wave> {
    (0.5f64..3.0, -3.0f64..3.0).prop_map(|(omega, phase)| Wave { omega, phase })
}

pub fn linear_factor(max: f64) -> impl Strategy<Value = FirstOrderOp> {
    (-max..max).prop_map(|a| FirstOrderOp { a })
}

/// Real-rooted quadratics, so that no eigenvalue of the clamped problem is hit.
pub fn quadratic_factor(max: f64) -> impl Strategy<Value = SecondOrderOp> {
    (-max..max, 0.1f64..max * max).prop_map(|(b, c)| SecondOrderOp { b, c: -c })
}

/// Roots `λ` of the characteristic polynomial; `e^{λy}` spans the kernel.
pub fn roots(op: &OperatorFactorization) -> Vec<f64> {
    let mut out: Vec<f64> = op.linear().iter().map(|f| f.a).collect();
    for q in op.quadratic() {
        let disc = (q.b * q.b - 4.0 * q.c).sqrt();
        out.push(0.5 * (-q.b + disc));
        out.push(0.5 * (-q.b - disc));
    }
    out
}

/// With [`Wave::conditions`] the BVP is well conditioned only if every mode
/// growing faster than `e^{steep·y}` is pinned at the end it grows towards.
pub fn well_conditioned(op: &OperatorFactorization, steep: f64) -> bool {
    let r = op.order();
    let rs = roots(op);
    let rising = rs.iter().filter(|&&l| l > steep).count();
    let falling = rs.iter().filter(|&&l| l < -steep).count();
    rising <= r / 2 && falling <= r - r / 2
}

pub fn factorization(max_order: usize, max: f64, steep: f64) -> impl Strategy<Value = OperatorFactorization> {
    (
        prop::collection::vec(linear_factor(max), 0..=max_order),
        prop::collection::vec(quadratic_factor(max), 0..=max_order / 2),
    )
        .prop_filter("order between 1 and max", move |(l, q)| {
            let r = l.len() + 2 * q.len();
            (1..=max_order).contains(&r)
        })
        .prop_map(|(l, q)| OperatorFactorization::new(l, q).unwrap())
        .prop_filter("ill-conditioned BVP", move |op| well_conditioned(op, steep))
}

pub fn sup_over(samples: usize, f: impl Fn(f64) -> f64) -> f64 {
    (0..=samples)
        .map(|j| (j as f64 * std::f64::consts::PI / samples as f64).cos())
        .map(f)
        .fold(0.0, f64::max)
}

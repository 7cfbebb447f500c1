//! Closed-form solutions used for error reports.

use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exact {
    /// `(D + a)u = a`, `u(-1) = 0`.
    LeftLayer { a: f64 },
    /// `(D² - aD)u = 0`, `u(-1) = 1`, `u(1) = 2`.
    RightLayer { a: f64 },
    SinPi,
    /// `(D² - a²)(D² - b²)u = a²b²` with clamped ends.
    Clamped { a: f64, b: f64 },
    /// `εu'' + yu' = 0`, `u(±1) = ±1`.
    InternalLayer { eps: f64 },
}

/// `cosh(ky) / cosh(k)` without overflow.
pub fn cosh_ratio(k: f64, y: f64) -> f64 {
    let (k, y) = (k.abs(), y.abs());
    (k * (y - 1.0)).exp() * (1.0 + (-2.0 * k * y).exp()) / (1.0 + (-2.0 * k).exp())
}

/// `k tanh k`.
fn k_tanh(k: f64) -> f64 {
    k * k.tanh()
}

impl Exact {
    pub fn from_params(name: &str, params: &BTreeMap<&str, f64>) -> Result<Self, String> {
        let expect = |keys: &[&str]| -> Result<Vec<f64>, String> {
            if let Some(k) = params.keys().find(|k| !keys.contains(k)) {
                return Err(format!("unknown parameter `{k}` for `{name}`"));
            }
            keys.iter()
                .map(|k| params.get(k).copied().ok_or_else(|| format!("`{name}` needs `{k}`")))
                .collect()
        };
        Ok(match name {
            "left_layer" => Exact::LeftLayer { a: expect(&["a"])?[0] },
            "right_layer" => Exact::RightLayer { a: expect(&["a"])?[0] },
            "sinpi" => {
                expect(&[])?;
                Exact::SinPi
            }
            "clamped" => {
                let v = expect(&["a", "b"])?;
                if k_tanh(v[0]) == k_tanh(v[1]) {
                    return Err("`clamped` needs |a| != |b|".into());
                }
                Exact::Clamped { a: v[0], b: v[1] }
            }
            "internal_layer" => {
                let eps = expect(&["eps"])?[0];
                if eps <= 0.0 {
                    return Err("`eps` must be positive".into());
                }
                Exact::InternalLayer { eps }
            }
            _ => return Err(format!("unknown exact solution `{name}`")),
        })
    }

    pub fn eval(&self, y: f64) -> f64 {
        match *self {
            Exact::LeftLayer { a } => -(-a * (y + 1.0)).exp_m1(),
            Exact::RightLayer { a } => 1.0 + ((a * (y - 1.0)).exp() - (-2.0 * a).exp()) / -(-2.0 * a).exp_m1(),
            Exact::SinPi => (PI * y).sin(),
            Exact::Clamped { a, b } => {
                let (ta, tb) = (k_tanh(a), k_tanh(b));
                let den = ta - tb;
                1.0 + (tb / den) * cosh_ratio(a, y) - (ta / den) * cosh_ratio(b, y)
            }
            Exact::InternalLayer { eps } => {
                let s = (2.0 * eps).sqrt();
                libm::erf(y / s) / libm::erf(1.0 / s)
            }
        }
    }
}

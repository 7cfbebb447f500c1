//! Line-based problem files.
//!
//! ```text
//! # (D + a)u = a on [-1, 1]
//! [operator]
//! linear = -1e6          # D - a, one factor per line
//! quadratic = 0 -1e4     # D² + bD + c
//! term = 2 1e-12         # pointwise operator: order, offset [slope]
//!
//! [rhs]
//! const = 1e6            # f = k + s sin(πy) + c cos(πy)
//! sinpi = 0
//! cospi = 0
//!
//! [grid]
//! m = 8192               # or: nodes = ... / orders = ...
//! backend = spectral
//!
//! [bc]
//! at=-1 d0=1 value=0     # Σ w_k u^(k)(at) = value
//!
//! [exact]
//! name = left_layer
//! a = 1e6
//! bounds = -1 1          # report overshoot beyond these
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::chebyshev::Endpoint;
use crate::factored::{BoundaryCondition, OperatorFactorization};
use crate::integration::{FirstOrderOp, SecondOrderOp};
use crate::piecewise::{CollocationOperator, Coefficient, PiecewiseGrid, PointwiseOperator};

use super::builtins::Exact;
use super::AppError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Backend {
    Spectral,
    Diffmat,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Spectral => "spectral",
            Backend::Diffmat => "diffmat",
        })
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "spectral" => Ok(Backend::Spectral),
            "diffmat" => Ok(Backend::Diffmat),
            _ => Err(format!("unknown backend `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSpec {
    Factored(OperatorFactorization),
    Pointwise(PointwiseOperator),
}

impl OperatorSpec {
    pub fn order(&self) -> usize {
        match self {
            OperatorSpec::Factored(op) => op.order(),
            OperatorSpec::Pointwise(op) => op.order(),
        }
    }

    pub fn collocation(&self) -> CollocationOperator {
        match self {
            OperatorSpec::Factored(op) => op.clone().into(),
            OperatorSpec::Pointwise(op) => op.clone().into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    Single(usize),
    Piecewise(PiecewiseGrid),
}

impl GridSpec {
    pub fn as_piecewise(&self) -> crate::Result<PiecewiseGrid> {
        match self {
            GridSpec::Single(m) => PiecewiseGrid::single(*m),
            GridSpec::Piecewise(g) => Ok(g.clone()),
        }
    }

    pub fn orders(&self) -> Vec<usize> {
        match self {
            GridSpec::Single(m) => vec![*m],
            GridSpec::Piecewise(g) => g.orders().to_vec(),
        }
    }
}

/// `constant + sinpi·sin(πy) + cospi·cos(πy)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Rhs {
    pub constant: f64,
    pub sinpi: f64,
    pub cospi: f64,
}

impl Rhs {
    pub fn eval(&self, y: f64) -> f64 {
        let mut v = self.constant;
        if self.sinpi != 0.0 {
            v += self.sinpi * (PI * y).sin();
        }
        if self.cospi != 0.0 {
            v += self.cospi * (PI * y).cos();
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub operator: OperatorSpec,
    pub rhs: Rhs,
    pub grid: GridSpec,
    pub backend: Backend,
    pub bcs: Vec<BoundaryCondition>,
    pub exact: Option<Exact>,
    pub bounds: Option<(f64, f64)>,
}

impl ProblemSpec {
    pub fn with_backend(mut self, backend: Backend) -> Result<Self, AppError> {
        if backend == Backend::Spectral && matches!(self.operator, OperatorSpec::Pointwise(_)) {
            return Err(AppError::Input("pointwise operators need the diffmat backend".into()));
        }
        self.backend = backend;
        Ok(self)
    }

    pub fn with_grid(mut self, grid: GridSpec) -> Self {
        self.grid = grid;
        self
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Operator,
    Rhs,
    Grid,
    Bc,
    Exact,
}

fn err(line: usize, msg: impl Into<String>) -> AppError {
    AppError::Parse { line, msg: msg.into() }
}

fn number(line: usize, s: &str) -> Result<f64, AppError> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(err(line, format!("malformed number `{s}`"))),
    }
}

fn numbers(line: usize, s: &str) -> Result<Vec<f64>, AppError> {
    s.split_whitespace().map(|t| number(line, t)).collect()
}

fn count(line: usize, s: &str) -> Result<usize, AppError> {
    s.parse::<usize>().map_err(|_| err(line, format!("malformed integer `{s}`")))
}

fn key_value(line: usize, text: &str) -> Result<(&str, &str), AppError> {
    let (k, v) = text.split_once('=').ok_or_else(|| err(line, "expected `key = value`"))?;
    Ok((k.trim(), v.trim()))
}

fn boundary_condition(line: usize, text: &str) -> Result<BoundaryCondition, AppError> {
    let mut at = None;
    let mut value = None;
    let mut weights = Vec::new();
    for token in text.split_whitespace() {
        let (k, v) = token
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected `key=value`, found `{token}`")))?;
        match k {
            "at" => {
                at = Some(match v {
                    "-1" | "left" => Endpoint::Left,
                    "+1" | "1" | "right" => Endpoint::Right,
                    _ => return Err(err(line, format!("`at` must be -1 or +1, found `{v}`"))),
                })
            }
            "value" => value = Some(number(line, v)?),
            _ => match k.strip_prefix('d').and_then(|d| d.parse::<usize>().ok()) {
                Some(d) => weights.push((d, number(line, v)?)),
                None => return Err(err(line, format!("unknown key `{k}`"))),
            },
        }
    }
    let at = at.ok_or_else(|| err(line, "missing `at`"))?;
    let value = value.ok_or_else(|| err(line, "missing `value`"))?;
    BoundaryCondition::new(at, weights, value).map_err(|e| err(line, e.to_string()))
}

pub fn parse_problem(text: &str) -> Result<ProblemSpec, AppError> {
    let mut section = None;
    let mut linear = Vec::new();
    let mut quadratic = Vec::new();
    let mut terms = Vec::new();
    let mut operator_line = 0;
    let mut rhs = Rhs::default();
    let mut grid: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    let mut bcs = Vec::new();
    let mut bc_line = 0;
    let mut exact: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        if let Some(name) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            section = Some(match name.trim() {
                "operator" => Section::Operator,
                "rhs" => Section::Rhs,
                "grid" => Section::Grid,
                "bc" => Section::Bc,
                "exact" => Section::Exact,
                other => return Err(err(line, format!("unknown section `[{other}]`"))),
            });
            continue;
        }
        let Some(current) = section else {
            return Err(err(line, "entry outside any section"));
        };
        match current {
            Section::Operator => {
                operator_line = line;
                let (k, v) = key_value(line, text)?;
                let vals = numbers(line, v)?;
                match (k, vals.as_slice()) {
                    ("linear", &[a]) => linear.push(FirstOrderOp { a }),
                    ("quadratic", &[b, c]) => quadratic.push(SecondOrderOp { b, c }),
                    ("term", &[d, offset]) | ("term", &[d, offset, _]) => {
                        if d < 0.0 || d.fract() != 0.0 {
                            return Err(err(line, "term order must be a nonnegative integer"));
                        }
                        let coeff = match vals.get(2) {
                            Some(&slope) => Coefficient::Affine { offset, slope },
                            None => Coefficient::Const(offset),
                        };
                        terms.push((d as usize, coeff));
                    }
                    ("linear" | "quadratic" | "term", _) => {
                        return Err(err(line, format!("wrong number of values for `{k}`")))
                    }
                    _ => return Err(err(line, format!("unknown key `{k}`"))),
                }
            }
            Section::Rhs => {
                let (k, v) = key_value(line, text)?;
                let v = number(line, v)?;
                match k {
                    "const" => rhs.constant = v,
                    "sinpi" => rhs.sinpi = v,
                    "cospi" => rhs.cospi = v,
                    _ => return Err(err(line, format!("unknown key `{k}`"))),
                }
            }
            Section::Grid | Section::Exact => {
                let (k, v) = key_value(line, text)?;
                let map = if current == Section::Grid { &mut grid } else { &mut exact };
                if map.insert(k, (line, v)).is_some() {
                    return Err(err(line, format!("duplicate key `{k}`")));
                }
            }
            Section::Bc => {
                bc_line = line;
                bcs.push(boundary_condition(line, text)?);
            }
        }
    }

    let operator = match (linear.is_empty() && quadratic.is_empty(), terms.is_empty()) {
        (true, true) => return Err(err(last_line, "missing [operator] factors")),
        (false, false) => return Err(err(operator_line, "mixing `term` with factors")),
        (false, true) => OperatorSpec::Factored(
            OperatorFactorization::new(linear, quadratic).map_err(|e| err(operator_line, e.to_string()))?,
        ),
        (true, false) => OperatorSpec::Pointwise(
            PointwiseOperator::new(terms).map_err(|e| err(operator_line, e.to_string()))?,
        ),
    };
    if bcs.len() != operator.order() {
        return Err(err(
            bc_line.max(1),
            format!("bc count mismatch: operator order {} but {} conditions", operator.order(), bcs.len()),
        ));
    }

    let grid_spec = match (grid.remove("m"), grid.remove("nodes"), grid.remove("orders")) {
        (Some((l, m)), None, None) => GridSpec::Single(count(l, m)?),
        (None, Some((ln, nodes)), Some((lo, orders))) => {
            let nodes = numbers(ln, nodes)?;
            let orders = orders.split_whitespace().map(|t| count(lo, t)).collect::<Result<_, _>>()?;
            GridSpec::Piecewise(PiecewiseGrid::new(nodes, orders).map_err(|e| err(ln, e.to_string()))?)
        }
        _ => return Err(err(last_line, "[grid] needs either `m` or both `nodes` and `orders`")),
    };
    let backend = match grid.remove("backend") {
        Some((l, b)) => b.parse().map_err(|e: String| err(l, e))?,
        None if matches!(operator, OperatorSpec::Pointwise(_)) => Backend::Diffmat,
        None => Backend::Spectral,
    };
    if let Some((k, (l, _))) = grid.into_iter().next() {
        return Err(err(l, format!("unknown key `{k}`")));
    }

    let bounds = match exact.remove("bounds") {
        Some((l, v)) => match numbers(l, v)?.as_slice() {
            &[lo, hi] if lo <= hi => Some((lo, hi)),
            _ => return Err(err(l, "`bounds` takes two increasing numbers")),
        },
        None => None,
    };
    let exact = match exact.remove("name") {
        Some((l, name)) => {
            let mut params = BTreeMap::new();
            for (k, (lp, v)) in std::mem::take(&mut exact) {
                params.insert(k, number(lp, v)?);
            }
            Some(Exact::from_params(name, &params).map_err(|m| err(l, m))?)
        }
        None => match exact.into_iter().next() {
            Some((_, (l, _))) => return Err(err(l, "[exact] parameters without `name`")),
            None => None,
        },
    };

    let spec = ProblemSpec { operator, rhs, grid: grid_spec, backend, bcs, exact, bounds };
    let backend = spec.backend;
    spec.with_backend(backend)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[operator]\nlinear = -2\n[rhs]\nconst = 2\n[grid]\nm = 16\n[bc]\nat=-1 d0=1 value=0\n";

    #[test]
    fn minimal_first_order() {
        let spec = parse_problem(MINIMAL).unwrap();
        assert_eq!(spec.operator.order(), 1);
        assert_eq!(spec.grid, GridSpec::Single(16));
        assert_eq!(spec.backend, Backend::Spectral);
        assert_eq!(spec.rhs.eval(0.3), 2.0);
        assert!(spec.exact.is_none());
    }

    #[test]
    fn bc_count_mismatch() {
        let text = format!("{MINIMAL}at=+1 d0=1 value=1\n");
        let e = parse_problem(&text).unwrap_err();
        assert!(e.to_string().contains("bc count mismatch"), "{e}");
        assert!(e.to_string().starts_with("line 9"), "{e}");
    }

    #[test]
    fn reports_line_numbers() {
        let cases = [
            ("[operator]\nlinear = x\n", 2, "malformed number"),
            ("[operator]\nlinea = 1\n", 2, "unknown key"),
            ("linear = 1\n", 1, "outside"),
            ("[ops]\n", 1, "unknown section"),
            ("[operator]\nlinear = 1\n[grid]\nm = 4\nm = 5\n", 5, "duplicate"),
            ("[operator]\nlinear = 1\n[grid]\nnodes = -1 1 0\norders = 4 4\n[bc]\nat=-1 d0=1 value=0\n", 4, "increasing"),
            ("[operator]\nlinear = 1\n[bc]\nat=0 d0=1 value=0\n", 4, "`at`"),
        ];
        for (text, line, needle) in cases {
            let e = parse_problem(text).unwrap_err().to_string();
            assert!(e.starts_with(&format!("line {line}:")), "{e}");
            assert!(e.contains(needle), "{e}");
        }
    }

    #[test]
    fn piecewise_pointwise_problem() {
        let text = "[operator]\nterm = 2 1e-12\nterm = 1 0 1\n[grid]\nnodes = -1 0 1\norders = 8 8\n\
                    [bc]\nat=-1 d0=1 value=-1\nat=+1 d0=1 value=1\n[exact]\nname = internal_layer\neps = 1e-12\nbounds = -1 1\n";
        let spec = parse_problem(text).unwrap();
        assert_eq!(spec.backend, Backend::Diffmat);
        assert_eq!(spec.bounds, Some((-1.0, 1.0)));
        assert!(matches!(spec.grid, GridSpec::Piecewise(_)));
        assert!(spec.clone().with_backend(Backend::Spectral).is_err());
        let bad = text.replace("[grid]\n", "[grid]\nbackend = spectral\n");
        assert!(parse_problem(&bad).is_err());
    }

    #[test]
    fn derivative_conditions() {
        let text = "[operator]\nquadratic = 0 -1\nquadratic = 0 -4\n[grid]\nm = 32\n[bc]\n\
                    at=-1 d0=1 value=0\nat=-1 d1=1 value=0\nat=+1 d0=1 value=0\nat=+1 d1=2 d0=1 value=0\n";
        let spec = parse_problem(text).unwrap();
        assert_eq!(spec.operator.order(), 4);
        assert_eq!(spec.bcs[3].weights(), &[(1, 2.0), (0, 1.0)]);
    }
}

//! A small expression language for maps `R^n -> R^n`, optionally depending
//! on one scalar parameter `t`, with floating and interval evaluation.
//!
//! ```text
//! dim 2
//! map g1 = 2*x1 - 0.5
//! map g2 = 0.25 + 0.5*x2
//! ```

mod expr;
mod parser;

use std::fmt;

use thiserror::Error;

use crate::interval::{Interval, IntervalBox, IntervalError};

pub use expr::{BinOp, Expr, Func, Literal};
pub use parser::{parse_expr, parse_program, Program};

use expr::{IntervalEnv, RealEnv};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("unknown identifier '{name}' at line {line}, column {col}")]
    UnknownIdentifier { name: String, line: usize, col: usize },
    #[error("dimension mismatch: {message}")]
    DimensionMismatch { declared: usize, found: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("expression may be undefined on the box: {0}")]
    PartialDomain(&'static str),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("point has dimension {found}, map has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the map depends on t but no parameter value was supplied")]
    MissingParameter,
    #[error("a parameter value was supplied to a map without 'param t'")]
    UnexpectedParameter,
    #[error(transparent)]
    Interval(IntervalError),
}

impl From<IntervalError> for EvalError {
    fn from(e: IntervalError) -> Self {
        match e {
            IntervalError::DivisionByIntervalContainingZero => {
                EvalError::PartialDomain("divisor may vanish")
            }
            IntervalError::DomainError(m) => EvalError::Domain(m),
            IntervalError::NonFinite(m) => EvalError::NonFinite(m),
            other => EvalError::Interval(other),
        }
    }
}

/// Interval value of a single expression without parameter.
pub(crate) fn eval_expr_interval(e: &Expr, x: &[Interval], strict: bool) -> Result<Interval, EvalError> {
    e.eval_interval(&IntervalEnv { x, t: None, strict })
}

/// A parsed map with one expression per output component.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSpec {
    dim: usize,
    components: Vec<Expr>,
    has_param: bool,
}

/// Parses a program and returns its map. Domain and `set` lines are
/// accepted and ignored here.
pub fn parse_map(source: &str) -> Result<MapSpec, ParseError> {
    parse_program(source).map(|p| p.map)
}

impl MapSpec {
    /// Assembles a map from expressions, checking that every variable is in
    /// range and that `t` only appears when `has_param` is set.
    pub fn from_components(
        dim: usize,
        has_param: bool,
        components: Vec<Expr>,
    ) -> Result<MapSpec, ParseError> {
        if dim == 0 || components.len() != dim {
            return Err(ParseError::DimensionMismatch {
                declared: dim,
                found: components.len(),
                message: format!("expected {dim} components, got {}", components.len()),
            });
        }
        for c in &components {
            if let Some(v) = c.max_var() {
                if v >= dim {
                    return Err(ParseError::UnknownIdentifier {
                        name: format!("x{}", v + 1),
                        line: 0,
                        col: 0,
                    });
                }
            }
            if !has_param && c.uses_param() {
                return Err(ParseError::UnknownIdentifier { name: "t".into(), line: 0, col: 0 });
            }
        }
        Ok(MapSpec { dim, components, has_param })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn has_param(&self) -> bool {
        self.has_param
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    fn check_param<T>(&self, t: Option<T>) -> Result<(), EvalError> {
        match (self.has_param, t.is_some()) {
            (true, false) => Err(EvalError::MissingParameter),
            (false, true) => Err(EvalError::UnexpectedParameter),
            _ => Ok(()),
        }
    }

    /// Floating-point evaluation. Non-finite intermediate values are errors.
    pub fn eval_real(&self, p: &[f64], t: Option<f64>) -> Result<Vec<f64>, EvalError> {
        if p.len() != self.dim {
            return Err(EvalError::DimensionMismatch { expected: self.dim, found: p.len() });
        }
        self.check_param(t)?;
        let env = RealEnv { x: p, t };
        self.components
            .iter()
            .map(|c| {
                let v = c.eval_real(&env)?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(EvalError::NonFinite("result"))
                }
            })
            .collect()
    }

    /// Naive interval extension: encloses `{ g(x) : x in b }`.
    pub fn eval_interval(&self, b: &IntervalBox, t: Option<Interval>) -> Result<IntervalBox, EvalError> {
        self.eval_interval_mode(b, t, false)
    }

    /// Like [`MapSpec::eval_interval`], but fails with
    /// [`EvalError::PartialDomain`] unless every operation is defined on the
    /// whole box. Success therefore also proves continuity on `b`.
    pub fn eval_interval_strict(
        &self,
        b: &IntervalBox,
        t: Option<Interval>,
    ) -> Result<IntervalBox, EvalError> {
        self.eval_interval_mode(b, t, true)
    }

    fn eval_interval_mode(
        &self,
        b: &IntervalBox,
        t: Option<Interval>,
        strict: bool,
    ) -> Result<IntervalBox, EvalError> {
        if b.dim() != self.dim {
            return Err(EvalError::DimensionMismatch { expected: self.dim, found: b.dim() });
        }
        self.check_param(t)?;
        let env = IntervalEnv { x: b.coords(), t, strict };
        let coords = self
            .components
            .iter()
            .map(|c| c.eval_interval(&env))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntervalBox::new(coords).expect("dim >= 1"))
    }

    /// Interval enclosure of a single component.
    pub fn eval_component_interval(
        &self,
        i: usize,
        b: &IntervalBox,
        t: Option<Interval>,
        strict: bool,
    ) -> Result<Interval, EvalError> {
        if b.dim() != self.dim {
            return Err(EvalError::DimensionMismatch { expected: self.dim, found: b.dim() });
        }
        self.check_param(t)?;
        self.components[i].eval_interval(&IntervalEnv { x: b.coords(), t, strict })
    }

    /// Replaces the components listed in `indices` by `f(i, component)`.
    pub fn map_components(&self, mut f: impl FnMut(usize, &Expr) -> Option<Expr>) -> MapSpec {
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| f(i, c).unwrap_or_else(|| c.clone()))
            .collect();
        MapSpec { dim: self.dim, components, has_param: self.has_param }
    }

    /// Fixes the parameter at `value`, yielding a map without `t`.
    pub fn substitute_param(&self, value: f64) -> MapSpec {
        let lit = Expr::constant(value);
        MapSpec {
            dim: self.dim,
            components: self.components.iter().map(|c| c.substitute_param(&lit)).collect(),
            has_param: false,
        }
    }

    /// Linear homotopy `(1 - t) f + t g` between two unparametrized maps.
    pub fn homotopy(f: &MapSpec, g: &MapSpec) -> Result<MapSpec, ParseError> {
        if f.dim != g.dim || f.has_param || g.has_param {
            return Err(ParseError::DimensionMismatch {
                declared: f.dim,
                found: g.dim,
                message: "homotopy needs two unparametrized maps of equal dimension".into(),
            });
        }
        let components = f
            .components
            .iter()
            .zip(&g.components)
            .map(|(a, b)| {
                let one_minus_t = Expr::binary(BinOp::Sub, Expr::constant(1.0), Expr::Param);
                Expr::binary(
                    BinOp::Add,
                    Expr::binary(BinOp::Mul, one_minus_t, a.clone()),
                    Expr::binary(BinOp::Mul, Expr::Param, b.clone()),
                )
            })
            .collect();
        MapSpec::from_components(f.dim, true, components)
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {}", self.dim)?;
        if self.has_param {
            writeln!(f, "param t")?;
        }
        for (i, c) in self.components.iter().enumerate() {
            writeln!(f, "map g{} = {}", i + 1, c)?;
        }
        Ok(())
    }
}

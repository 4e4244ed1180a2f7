use std::fmt;

use num_bigint::BigInt;

use crate::interval::{Interval, IntervalError};

use super::EvalError;

/// A numeric literal as written, with its real value and an interval that
/// encloses the decimal number exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Literal {
    text: String,
    value: f64,
    enclosure: Interval,
}

impl Literal {
    /// Parses a decimal literal. Returns `None` if the text is not a finite
    /// decimal number.
    pub fn parse(text: &str) -> Option<Literal> {
        let value: f64 = text.parse().ok()?;
        if !value.is_finite() {
            return None;
        }
        let enclosure = decimal_enclosure(text, value)?;
        Some(Literal { text: text.to_string(), value, enclosure })
    }

    /// Literal for a value that is already a float.
    pub fn from_f64(value: f64) -> Literal {
        let text = format!("{value:?}");
        Literal::parse(&text).unwrap_or(Literal {
            text,
            value,
            enclosure: Interval::point(value),
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn enclosure(&self) -> Interval {
        self.enclosure
    }
}

/// Splits `[digits][.digits][e[+-]digits]` into an integer mantissa and a
/// power-of-ten exponent.
fn decimal_parts(text: &str) -> Option<(BigInt, i64)> {
    let lower = text.to_ascii_lowercase();
    let (mant, exp) = match lower.split_once('e') {
        Some((m, e)) => (m.to_string(), e.parse::<i64>().ok()?),
        None => (lower, 0),
    };
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((i, f)) => (i.to_string(), f.to_string()),
        None => (mant, String::new()),
    };
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let m: BigInt = digits.parse().ok()?;
    Some((m, exp - frac_part.len() as i64))
}

/// `x = mant * 2^exp` exactly, for finite non-negative `x`.
fn float_parts(x: f64) -> (BigInt, i64) {
    let bits = x.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 {
        (BigInt::from(frac), -1074)
    } else {
        (BigInt::from(frac | (1u64 << 52)), exp_bits - 1075)
    }
}

fn decimal_enclosure(text: &str, value: f64) -> Option<Interval> {
    let (m, e10) = decimal_parts(text)?;
    // Literals never carry a sign; the unary minus is a separate node.
    if value < 0.0 {
        return None;
    }
    // Exponents that large are not exactly comparable in reasonable time.
    if e10.abs() > 400 {
        return Some(Interval::new(value.next_down().max(0.0), value.next_up()).ok()?);
    }
    let (fm, e2) = float_parts(value);
    let ten = BigInt::from(10u32);
    let two = BigInt::from(2u32);
    let mut lhs = m;
    let mut rhs = fm;
    if e10 >= 0 {
        lhs *= ten.pow(e10 as u32);
    } else {
        rhs *= ten.pow((-e10) as u32);
    }
    if e2 >= 0 {
        rhs *= two.pow(e2 as u32);
    } else {
        lhs *= two.pow((-e2) as u32);
    }
    let iv = match lhs.cmp(&rhs) {
        std::cmp::Ordering::Equal => Interval::point(value),
        std::cmp::Ordering::Less => Interval::new(value.next_down().max(0.0), value).ok()?,
        std::cmp::Ordering::Greater => Interval::new(value, value.next_up()).ok()?,
    };
    Some(iv)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Tanh,
    Sqrt,
    Abs,
    Min,
    Max,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "tanh" => Func::Tanh,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "min" => Func::Min,
            "max" => Func::Max,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Tanh => "tanh",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Min => "min",
            Func::Max => "max",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Literal),
    /// Zero-based state variable (`x1` is `Var(0)`).
    Var(usize),
    Param,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Vec<Expr>),
}

/// Variable bindings for one evaluation.
pub(crate) struct RealEnv<'a> {
    pub x: &'a [f64],
    pub t: Option<f64>,
}

pub(crate) struct IntervalEnv<'a> {
    pub x: &'a [Interval],
    pub t: Option<Interval>,
    /// Reject arguments of `sqrt` that reach below zero instead of cutting
    /// them, so that a successful evaluation also proves the expression is
    /// defined on the whole box.
    pub strict: bool,
}

fn finite(v: f64, what: &'static str) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite(what))
    }
}

impl Expr {
    pub fn constant(value: f64) -> Expr {
        Expr::Const(Literal::from_f64(value))
    }

    pub fn binary(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    /// Largest variable index used, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) | Expr::Param => None,
            Expr::Var(i) => Some(*i),
            Expr::Neg(e) | Expr::Pow(e, _) => e.max_var(),
            Expr::Binary(_, a, b) => a.max_var().max(b.max_var()),
            Expr::Call(_, args) => args.iter().filter_map(Expr::max_var).max(),
        }
    }

    pub fn uses_param(&self) -> bool {
        match self {
            Expr::Param => true,
            Expr::Const(_) | Expr::Var(_) => false,
            Expr::Neg(e) | Expr::Pow(e, _) => e.uses_param(),
            Expr::Binary(_, a, b) => a.uses_param() || b.uses_param(),
            Expr::Call(_, args) => args.iter().any(Expr::uses_param),
        }
    }

    /// Replaces every occurrence of the parameter by `value`.
    pub fn substitute_param(&self, value: &Expr) -> Expr {
        match self {
            Expr::Param => value.clone(),
            Expr::Const(_) | Expr::Var(_) => self.clone(),
            Expr::Neg(e) => Expr::Neg(Box::new(e.substitute_param(value))),
            Expr::Pow(e, n) => Expr::Pow(Box::new(e.substitute_param(value)), *n),
            Expr::Binary(op, a, b) => {
                Expr::binary(*op, a.substitute_param(value), b.substitute_param(value))
            }
            Expr::Call(f, args) => {
                Expr::Call(*f, args.iter().map(|a| a.substitute_param(value)).collect())
            }
        }
    }

    /// Replaces `Var(i)` by `values[i]`.
    pub fn substitute_vars(&self, values: &[Expr]) -> Expr {
        match self {
            Expr::Var(i) => values[*i].clone(),
            Expr::Const(_) | Expr::Param => self.clone(),
            Expr::Neg(e) => Expr::Neg(Box::new(e.substitute_vars(values))),
            Expr::Pow(e, n) => Expr::Pow(Box::new(e.substitute_vars(values)), *n),
            Expr::Binary(op, a, b) => {
                Expr::binary(*op, a.substitute_vars(values), b.substitute_vars(values))
            }
            Expr::Call(f, args) => {
                Expr::Call(*f, args.iter().map(|a| a.substitute_vars(values)).collect())
            }
        }
    }

    fn is_const(&self, v: f64) -> bool {
        matches!(self, Expr::Const(lit) if lit.value() == v && lit.enclosure().width() == 0.0)
    }

    fn sum(a: Expr, b: Expr) -> Expr {
        if a.is_const(0.0) {
            b
        } else if b.is_const(0.0) {
            a
        } else {
            Expr::binary(BinOp::Add, a, b)
        }
    }

    fn product(a: Expr, b: Expr) -> Expr {
        if a.is_const(0.0) || b.is_const(0.0) {
            Expr::constant(0.0)
        } else if a.is_const(1.0) {
            b
        } else if b.is_const(1.0) {
            a
        } else {
            Expr::binary(BinOp::Mul, a, b)
        }
    }

    fn negated(a: Expr) -> Expr {
        if a.is_const(0.0) {
            a
        } else {
            Expr::Neg(Box::new(a))
        }
    }

    /// Symbolic partial derivative with respect to `Var(var)`, treating the
    /// parameter as a constant. `None` for the non-smooth functions `abs`,
    /// `min` and `max`.
    pub fn derivative(&self, var: usize) -> Option<Expr> {
        Some(match self {
            Expr::Const(_) | Expr::Param => Expr::constant(0.0),
            Expr::Var(i) => Expr::constant(if *i == var { 1.0 } else { 0.0 }),
            Expr::Neg(e) => Expr::negated(e.derivative(var)?),
            Expr::Binary(op, a, b) => {
                let (da, db) = (a.derivative(var)?, b.derivative(var)?);
                let (a, b) = ((**a).clone(), (**b).clone());
                match op {
                    BinOp::Add => Expr::sum(da, db),
                    BinOp::Sub => Expr::sum(da, Expr::negated(db)),
                    BinOp::Mul => Expr::sum(Expr::product(da, b), Expr::product(a, db)),
                    BinOp::Div => {
                        let first = if da.is_const(0.0) {
                            da
                        } else {
                            Expr::binary(BinOp::Div, da, b.clone())
                        };
                        let second = if db.is_const(0.0) {
                            db
                        } else {
                            Expr::binary(
                                BinOp::Div,
                                Expr::product(a, db),
                                Expr::Pow(Box::new(b), 2),
                            )
                        };
                        Expr::sum(first, Expr::negated(second))
                    }
                }
            }
            Expr::Pow(e, n) => {
                let de = e.derivative(var)?;
                if *n == 0 || de.is_const(0.0) {
                    return Some(Expr::constant(0.0));
                }
                let inner = if *n == 1 {
                    Expr::constant(1.0)
                } else {
                    Expr::product(
                        Expr::constant(f64::from(*n)),
                        Expr::Pow(e.clone(), n - 1),
                    )
                };
                Expr::product(inner, de)
            }
            Expr::Call(f, args) => {
                let x = args[0].clone();
                let dx = x.derivative(var)?;
                if matches!(f, Func::Abs | Func::Min | Func::Max) {
                    return None;
                }
                if dx.is_const(0.0) {
                    return Some(dx);
                }
                let outer = match f {
                    Func::Sin => Expr::Call(Func::Cos, vec![x]),
                    Func::Cos => Expr::Neg(Box::new(Expr::Call(Func::Sin, vec![x]))),
                    Func::Exp => Expr::Call(Func::Exp, vec![x]),
                    Func::Tanh => Expr::binary(
                        BinOp::Sub,
                        Expr::constant(1.0),
                        Expr::Pow(Box::new(Expr::Call(Func::Tanh, vec![x])), 2),
                    ),
                    Func::Sqrt => Expr::binary(
                        BinOp::Div,
                        Expr::constant(0.5),
                        Expr::Call(Func::Sqrt, vec![x]),
                    ),
                    Func::Abs | Func::Min | Func::Max => unreachable!(),
                };
                Expr::product(outer, dx)
            }
        })
    }

    pub(crate) fn eval_real(&self, env: &RealEnv<'_>) -> Result<f64, EvalError> {
        match self {
            Expr::Const(lit) => Ok(lit.value()),
            Expr::Var(i) => Ok(env.x[*i]),
            Expr::Param => env.t.ok_or(EvalError::MissingParameter),
            Expr::Neg(e) => Ok(-e.eval_real(env)?),
            Expr::Binary(op, a, b) => {
                let x = a.eval_real(env)?;
                let y = b.eval_real(env)?;
                match op {
                    BinOp::Add => finite(x + y, "addition"),
                    BinOp::Sub => finite(x - y, "subtraction"),
                    BinOp::Mul => finite(x * y, "multiplication"),
                    BinOp::Div => {
                        if y == 0.0 {
                            Err(EvalError::DivisionByZero)
                        } else {
                            finite(x / y, "division")
                        }
                    }
                }
            }
            Expr::Pow(e, n) => {
                let x = e.eval_real(env)?;
                if *n < 0 && x == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                finite(x.powi(*n), "power")
            }
            Expr::Call(f, args) => {
                let x = args[0].eval_real(env)?;
                match f {
                    Func::Sin => Ok(x.sin()),
                    Func::Cos => Ok(x.cos()),
                    Func::Exp => finite(x.exp(), "exp"),
                    Func::Tanh => Ok(x.tanh()),
                    Func::Abs => Ok(x.abs()),
                    Func::Sqrt => {
                        if x < 0.0 {
                            Err(EvalError::Domain("sqrt of a negative number"))
                        } else {
                            Ok(x.sqrt())
                        }
                    }
                    Func::Min => Ok(x.min(args[1].eval_real(env)?)),
                    Func::Max => Ok(x.max(args[1].eval_real(env)?)),
                }
            }
        }
    }

    pub(crate) fn eval_interval(&self, env: &IntervalEnv<'_>) -> Result<Interval, EvalError> {
        let r: Result<Interval, IntervalError> = match self {
            Expr::Const(lit) => Ok(lit.enclosure()),
            Expr::Var(i) => Ok(env.x[*i]),
            Expr::Param => return env.t.ok_or(EvalError::MissingParameter),
            Expr::Neg(e) => Ok(e.eval_interval(env)?.neg()),
            Expr::Binary(op, a, b) => {
                let x = a.eval_interval(env)?;
                let y = b.eval_interval(env)?;
                match op {
                    BinOp::Add => x.add(y),
                    BinOp::Sub => x.sub(y),
                    BinOp::Mul => x.mul(y),
                    BinOp::Div => x.div(y),
                }
            }
            Expr::Pow(e, n) => e.eval_interval(env)?.powi(*n),
            Expr::Call(f, args) => {
                let x = args[0].eval_interval(env)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Tanh => x.tanh(),
                    Func::Abs => Ok(x.abs()),
                    Func::Sqrt => {
                        if env.strict && x.lo() < 0.0 && x.hi() >= 0.0 {
                            return Err(EvalError::PartialDomain("sqrt argument may be negative"));
                        }
                        x.sqrt()
                    }
                    Func::Min => Ok(x.min(args[1].eval_interval(env)?)),
                    Func::Max => Ok(x.max(args[1].eval_interval(env)?)),
                }
            }
        };
        r.map_err(EvalError::from)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, _, _) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, _, _) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(_, _) => 4,
            _ => 5,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(lit) => write!(f, "{}", lit.text()),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Param => write!(f, "t"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.fmt_child(f, 4)
            }
            Expr::Binary(op, a, b) => {
                let p = self.precedence();
                a.fmt_child(f, p)?;
                write!(f, " {} ", op.symbol())?;
                // left-associative: the right operand binds tighter
                b.fmt_child(f, p + 1)
            }
            Expr::Pow(e, n) => {
                e.fmt_child(f, 5)?;
                write!(f, "^{n}")
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

//! Outward-rounded interval arithmetic on scalars and boxes.
//!
//! The four basic operations and `sqrt` are rounded with error-free
//! transformations (TwoSum and FMA residuals), so a bound is moved to the
//! neighbouring float only when the floating result is actually inexact.
//! Transcendentals go through the platform libm and are padded outward.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Libm results are trusted to this many ulps.
const TRANSCENDENTAL_PAD_ULPS: u32 = 2;

/// Products below this magnitude may have an inexact FMA residual
/// (gradual underflow), so they are widened unconditionally.
const UNDERFLOW_GUARD: f64 = 1e-290;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("invalid interval bounds [{lo}, {hi}]")]
    InvalidBounds { lo: f64, hi: f64 },
    #[error("division by an interval containing zero")]
    DivisionByIntervalContainingZero,
    #[error("domain error: {0}")]
    DomainError(&'static str),
    #[error("non-finite result in {0}")]
    NonFinite(&'static str),
    #[error("axis {0} has zero width and cannot be bisected")]
    DegenerateAxis(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("a box needs at least one coordinate")]
    EmptyBox,
}

pub type Result<T> = std::result::Result<T, IntervalError>;

/// Elementary operations understood by [`interval_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Abs,
    Min,
    Max,
    PowInt(i32),
    Sqrt,
    Sin,
    Cos,
    Exp,
    Tanh,
}

impl Op {
    pub fn is_binary(self) -> bool {
        matches!(self, Op::Add | Op::Sub | Op::Mul | Op::Div | Op::Min | Op::Max)
    }

    /// Exact pointwise evaluation in floating point, used as the reference
    /// semantics by the real evaluator.
    pub fn apply_real(self, x: f64, y: f64) -> f64 {
        match self {
            Op::Add => x + y,
            Op::Sub => x - y,
            Op::Mul => x * y,
            Op::Div => x / y,
            Op::Neg => -x,
            Op::Abs => x.abs(),
            Op::Min => x.min(y),
            Op::Max => x.max(y),
            Op::PowInt(n) => x.powi(n),
            Op::Sqrt => x.sqrt(),
            Op::Sin => x.sin(),
            Op::Cos => x.cos(),
            Op::Exp => x.exp(),
            Op::Tanh => x.tanh(),
        }
    }
}

/// Closed real interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

fn check_finite(lo: f64, hi: f64, what: &'static str) -> Result<Interval> {
    if lo.is_finite() && hi.is_finite() {
        Ok(Interval { lo, hi })
    } else {
        Err(IntervalError::NonFinite(what))
    }
}

fn pad_down(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_down())
}

fn pad_up(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_up())
}

fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return s;
    }
    if two_sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return s;
    }
    if two_sum_err(a, b, s) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

/// Returns the rounded product and the sign of `exact - rounded`
/// (`None` when the residual cannot be trusted).
fn mul_residual(a: f64, b: f64) -> (f64, Option<f64>) {
    let p = a * b;
    if p == 0.0 && a != 0.0 && b != 0.0 || p != 0.0 && p.abs() < UNDERFLOW_GUARD {
        return (p, None);
    }
    (p, Some(a.mul_add(b, -p)))
}

fn mul_down(a: f64, b: f64) -> f64 {
    match mul_residual(a, b) {
        (p, Some(e)) if e >= 0.0 => p,
        (p, _) => p.next_down(),
    }
}

fn mul_up(a: f64, b: f64) -> f64 {
    match mul_residual(a, b) {
        (p, Some(e)) if e <= 0.0 => p,
        (p, _) => p.next_up(),
    }
}

fn div_residual_sign(a: f64, b: f64) -> (f64, Option<f64>) {
    let q = a / b;
    if q == 0.0 && a != 0.0 || q != 0.0 && q.abs() < UNDERFLOW_GUARD || !q.is_finite() {
        return (q, None);
    }
    // a - q*b is exact; sign(a/b - q) = sign(r) * sign(b).
    let r = -q.mul_add(b, -a);
    (q, Some(r * b.signum()))
}

fn div_down(a: f64, b: f64) -> f64 {
    match div_residual_sign(a, b) {
        (q, Some(e)) if e >= 0.0 => q,
        (q, _) => q.next_down(),
    }
}

fn div_up(a: f64, b: f64) -> f64 {
    match div_residual_sign(a, b) {
        (q, Some(e)) if e <= 0.0 => q,
        (q, _) => q.next_up(),
    }
}

fn sqrt_down(x: f64) -> f64 {
    let s = x.sqrt();
    if x == 0.0 {
        return 0.0;
    }
    let r = -s.mul_add(s, -x);
    if r >= 0.0 {
        s
    } else {
        s.next_down().max(0.0)
    }
}

fn sqrt_up(x: f64) -> f64 {
    let s = x.sqrt();
    if x == 0.0 {
        return 0.0;
    }
    let r = -s.mul_add(s, -x);
    if r <= 0.0 {
        s
    } else {
        s.next_up()
    }
}

/// True when some `phase + 2kπ` may lie in `[lo, hi]`. Errs on the side of
/// reporting a critical point.
fn may_contain_phase(lo: f64, hi: f64, phase: f64) -> bool {
    let two_pi = 2.0 * PI;
    let slack = 1e-9 + 1e-14 * lo.abs().max(hi.abs());
    let k_lo = ((lo - phase) / two_pi - slack).ceil();
    let k_hi = ((hi - phase) / two_pi + slack).floor();
    k_lo <= k_hi
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || !lo.is_finite() || !hi.is_finite() {
            return Err(IntervalError::InvalidBounds { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// Degenerate interval `[x, x]`. Panics on non-finite input.
    pub fn point(x: f64) -> Self {
        assert!(x.is_finite(), "Interval::point requires a finite value");
        Self { lo: x, hi: x }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// A float inside the interval, close to its centre.
    pub fn midpoint(&self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, b: Interval) -> Result<Interval> {
        check_finite(add_down(self.lo, b.lo), add_up(self.hi, b.hi), "addition")
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, b: Interval) -> Result<Interval> {
        check_finite(add_down(self.lo, -b.hi), add_up(self.hi, -b.lo), "subtraction")
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, b: Interval) -> Result<Interval> {
        let pairs = [(self.lo, b.lo), (self.lo, b.hi), (self.hi, b.lo), (self.hi, b.hi)];
        let lo = pairs.iter().map(|&(x, y)| mul_down(x, y)).fold(f64::INFINITY, f64::min);
        let hi = pairs.iter().map(|&(x, y)| mul_up(x, y)).fold(f64::NEG_INFINITY, f64::max);
        check_finite(lo, hi, "multiplication")
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, b: Interval) -> Result<Interval> {
        if b.contains_zero() {
            return Err(IntervalError::DivisionByIntervalContainingZero);
        }
        let pairs = [(self.lo, b.lo), (self.lo, b.hi), (self.hi, b.lo), (self.hi, b.hi)];
        let lo = pairs.iter().map(|&(x, y)| div_down(x, y)).fold(f64::INFINITY, f64::min);
        let hi = pairs.iter().map(|&(x, y)| div_up(x, y)).fold(f64::NEG_INFINITY, f64::max);
        check_finite(lo, hi, "division")
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Interval { lo: 0.0, hi: self.mag() }
        }
    }

    pub fn min(self, b: Interval) -> Interval {
        Interval { lo: self.lo.min(b.lo), hi: self.hi.min(b.hi) }
    }

    pub fn max(self, b: Interval) -> Interval {
        Interval { lo: self.lo.max(b.lo), hi: self.hi.max(b.hi) }
    }

    pub fn sqr(self) -> Result<Interval> {
        self.powi(2)
    }

    /// Integer power. Negative exponents divide and therefore reject
    /// intervals containing zero.
    pub fn powi(self, n: i32) -> Result<Interval> {
        if n == 0 {
            return Ok(Interval::point(1.0));
        }
        if n < 0 {
            return Interval::point(1.0).div(self.powi(n.checked_neg().ok_or(
                IntervalError::DomainError("exponent out of range"),
            )?)?);
        }
        let n = n as u32;
        if n % 2 == 0 {
            let m = self.abs();
            let hi = pow_nonneg(m.hi, n)?.hi;
            let lo = pow_nonneg(m.lo, n)?.lo;
            check_finite(lo, hi, "power")
        } else {
            let lo = pow_signed(self.lo, n)?.lo;
            let hi = pow_signed(self.hi, n)?.hi;
            check_finite(lo, hi, "power")
        }
    }

    /// Square root; the part of the argument below zero is cut away.
    pub fn sqrt(self) -> Result<Interval> {
        if self.hi < 0.0 {
            return Err(IntervalError::DomainError("sqrt of a negative interval"));
        }
        let lo = self.lo.max(0.0);
        Ok(Interval { lo: sqrt_down(lo), hi: sqrt_up(self.hi) })
    }

    pub fn exp(self) -> Result<Interval> {
        let lo = if self.lo == 0.0 { 1.0 } else { pad_down(self.lo.exp(), TRANSCENDENTAL_PAD_ULPS) };
        let hi = if self.hi == 0.0 { 1.0 } else { pad_up(self.hi.exp(), TRANSCENDENTAL_PAD_ULPS) };
        check_finite(lo.max(0.0), hi, "exp")
    }

    pub fn tanh(self) -> Result<Interval> {
        let lo = if self.lo == 0.0 { 0.0 } else { pad_down(self.lo.tanh(), TRANSCENDENTAL_PAD_ULPS) };
        let hi = if self.hi == 0.0 { 0.0 } else { pad_up(self.hi.tanh(), TRANSCENDENTAL_PAD_ULPS) };
        Ok(Interval { lo: lo.max(-1.0), hi: hi.min(1.0) })
    }

    pub fn sin(self) -> Result<Interval> {
        Ok(self.periodic(f64::sin, FRAC_PI_2, -FRAC_PI_2, |x| x == 0.0, 0.0))
    }

    pub fn cos(self) -> Result<Interval> {
        Ok(self.periodic(f64::cos, 0.0, PI, |x| x == 0.0, 1.0))
    }

    /// Range of a 2π-periodic function with maxima at `max_phase + 2kπ`,
    /// minima at `min_phase + 2kπ`, monotone in between.
    fn periodic(
        self,
        f: fn(f64) -> f64,
        max_phase: f64,
        min_phase: f64,
        exact_at: fn(f64) -> bool,
        exact_value: f64,
    ) -> Interval {
        let full = Interval { lo: -1.0, hi: 1.0 };
        if self.width() >= 2.0 * PI || self.mag() > 1e8 {
            return full;
        }
        let eval = |x: f64| -> Interval {
            if exact_at(x) {
                Interval::point(exact_value)
            } else {
                let v = f(x);
                Interval {
                    lo: pad_down(v, TRANSCENDENTAL_PAD_ULPS),
                    hi: pad_up(v, TRANSCENDENTAL_PAD_ULPS),
                }
            }
        };
        let mut r = eval(self.lo).hull(&eval(self.hi));
        if may_contain_phase(self.lo, self.hi, max_phase) {
            r.hi = 1.0;
        }
        if may_contain_phase(self.lo, self.hi, min_phase) {
            r.lo = -1.0;
        }
        Interval { lo: r.lo.max(-1.0), hi: r.hi.min(1.0) }
    }
}

/// Enclosure of `x^n` for `x >= 0`.
fn pow_nonneg(x: f64, n: u32) -> Result<Interval> {
    let mut acc = Interval::point(1.0);
    let mut base = Interval::point(x);
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(base)?;
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(base)?;
        }
    }
    Ok(acc)
}

/// Enclosure of `x^n` for odd `n` and any sign of `x`.
fn pow_signed(x: f64, n: u32) -> Result<Interval> {
    let m = pow_nonneg(x.abs(), n)?;
    Ok(if x < 0.0 { m.neg() } else { m })
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&self.lo)?;
        seq.serialize_element(&self.hi)?;
        seq.end()
    }
}

/// Dispatches one elementary operation. `b` is required for binary ops.
pub fn interval_arith(op: Op, a: Interval, b: Option<Interval>) -> Result<Interval> {
    let rhs = || b.ok_or(IntervalError::DomainError("binary operation needs two operands"));
    match op {
        Op::Add => a.add(rhs()?),
        Op::Sub => a.sub(rhs()?),
        Op::Mul => a.mul(rhs()?),
        Op::Div => a.div(rhs()?),
        Op::Min => Ok(a.min(rhs()?)),
        Op::Max => Ok(a.max(rhs()?)),
        Op::Neg => Ok(a.neg()),
        Op::Abs => Ok(a.abs()),
        Op::PowInt(n) => a.powi(n),
        Op::Sqrt => a.sqrt(),
        Op::Sin => a.sin(),
        Op::Cos => a.cos(),
        Op::Exp => a.exp(),
        Op::Tanh => a.tanh(),
    }
}

/// Axis-aligned box: one interval per dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalBox {
    coords: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(coords: Vec<Interval>) -> Result<Self> {
        if coords.is_empty() {
            return Err(IntervalError::EmptyBox);
        }
        Ok(Self { coords })
    }

    /// Builds a box from `(lo, hi)` pairs.
    pub fn from_bounds(bounds: &[(f64, f64)]) -> Result<Self> {
        let coords = bounds
            .iter()
            .map(|&(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coords)
    }

    pub fn from_point(p: &[f64]) -> Result<Self> {
        Self::new(p.iter().map(|&x| Interval::new(x, x)).collect::<Result<Vec<_>>>()?)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Interval] {
        &self.coords
    }

    pub fn coord(&self, axis: usize) -> Interval {
        self.coords[axis]
    }

    pub fn into_coords(self) -> Vec<Interval> {
        self.coords
    }

    /// Largest coordinate width.
    pub fn width(&self) -> f64 {
        self.coords.iter().map(Interval::width).fold(0.0, f64::max)
    }

    /// First axis of maximal width.
    pub fn widest_axis(&self) -> usize {
        let mut best = 0;
        for (i, c) in self.coords.iter().enumerate() {
            if c.width() > self.coords[best].width() {
                best = i;
            }
        }
        best
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.coords.iter().map(Interval::midpoint).collect()
    }

    pub fn lower_corner(&self) -> Vec<f64> {
        self.coords.iter().map(Interval::lo).collect()
    }

    pub fn volume(&self) -> f64 {
        self.coords.iter().map(Interval::width).product()
    }

    /// Splits at the midpoint of `axis`; the halves share that midpoint.
    pub fn bisect(&self, axis: usize) -> Result<(IntervalBox, IntervalBox)> {
        if axis >= self.dim() {
            return Err(IntervalError::AxisOutOfRange { axis, dim: self.dim() });
        }
        let c = self.coords[axis];
        if c.width() <= 0.0 {
            return Err(IntervalError::DegenerateAxis(axis));
        }
        let m = c.midpoint();
        let mut left = self.clone();
        let mut right = self.clone();
        left.coords[axis] = Interval { lo: c.lo, hi: m };
        right.coords[axis] = Interval { lo: m, hi: c.hi };
        Ok((left, right))
    }

    pub fn bisect_widest(&self) -> Result<(IntervalBox, IntervalBox)> {
        self.bisect(self.widest_axis())
    }

    /// Closed-box membership.
    pub fn contains_point(&self, p: &[f64]) -> Result<bool> {
        if p.len() != self.dim() {
            return Err(IntervalError::DimensionMismatch { expected: self.dim(), found: p.len() });
        }
        Ok(self.coords.iter().zip(p).all(|(c, &x)| c.contains(x)))
    }

    pub fn is_subset_of(&self, other: &IntervalBox) -> bool {
        self.dim() == other.dim()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| a.is_subset_of(b))
    }

    pub fn intersects(&self, other: &IntervalBox) -> bool {
        self.dim() == other.dim()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| a.intersects(b))
    }

    pub fn hull(&self, other: &IntervalBox) -> IntervalBox {
        IntervalBox {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.hull(b)).collect(),
        }
    }

    /// Copy with coordinate `axis` replaced.
    pub fn with_coord(&self, axis: usize, value: Interval) -> IntervalBox {
        let mut out = self.clone();
        out.coords[axis] = value;
        out
    }

    /// Prepends a coordinate (used to build `[a,b] x A` cylinders).
    pub fn prepend(&self, first: Interval) -> IntervalBox {
        let mut coords = Vec::with_capacity(self.dim() + 1);
        coords.push(first);
        coords.extend_from_slice(&self.coords);
        IntervalBox { coords }
    }
}

impl fmt::Display for IntervalBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Serialize for IntervalBox {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coords.len()))?;
        for c in &self.coords {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

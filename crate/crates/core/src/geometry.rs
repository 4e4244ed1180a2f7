//! Theorem domains and the explicit maps used to move between them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalBox};
use crate::mapdsl::{BinOp, Expr, MapSpec};

/// The rectangle `prod [a_i, b_i]` with `a_i < b_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RectDomain {
    #[serde(rename = "box")]
    bounds: IntervalBox,
}

impl RectDomain {
    pub fn new(bounds: IntervalBox) -> Result<Self> {
        if let Some(i) = bounds.coords().iter().position(|c| c.width() <= 0.0) {
            return Err(Error::InvalidDomain(format!("coordinate {} has zero width", i + 1)));
        }
        Ok(Self { bounds })
    }

    pub fn from_bounds(bounds: &[(f64, f64)]) -> Result<Self> {
        Self::new(IntervalBox::from_bounds(bounds)?)
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn as_box(&self) -> &IntervalBox {
        &self.bounds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    Plus,
}

/// The `i`-face `{x in R : x_i = a_i}` (minus) or `{x_i = b_i}` (plus).
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub parent: RectDomain,
    pub axis: usize,
    pub side: Side,
    pub as_box: IntervalBox,
}

impl Face {
    /// Short label such as `x1-` or `x2+`.
    pub fn id(&self) -> String {
        face_label(self.axis, self.side)
    }

    /// The coordinate value the face pins.
    pub fn level(&self) -> f64 {
        self.as_box.coord(self.axis).lo()
    }
}

pub(crate) fn face_label(axis: usize, side: Side) -> String {
    match side {
        Side::Minus => format!("x{}-", axis + 1),
        Side::Plus => format!("x{}+", axis + 1),
    }
}

pub fn face(r: &RectDomain, axis: usize, side: Side) -> Result<Face> {
    if axis >= r.dim() {
        return Err(Error::IndexOutOfRange { index: axis, dim: r.dim() });
    }
    let c = r.bounds.coord(axis);
    let v = match side {
        Side::Minus => c.lo(),
        Side::Plus => c.hi(),
    };
    Ok(Face {
        parent: r.clone(),
        axis,
        side,
        as_box: r.bounds.with_coord(axis, Interval::point(v)),
    })
}

/// Componentwise `min(b_i, max(x_i, a_i))`.
pub fn clamp_projection(p: &[f64], r: &RectDomain) -> Result<Vec<f64>> {
    if p.len() != r.dim() {
        return Err(Error::DimensionMismatch { expected: r.dim(), found: p.len() });
    }
    Ok(p.iter()
        .zip(r.bounds.coords())
        .map(|(&x, c)| x.max(c.lo()).min(c.hi()))
        .collect())
}

/// Replaces `g_i` by `2 x_i - g_i` for every `i` in `flip_set` (zero-based).
/// The result has the same fixed points, and swaps the expansive and
/// compressive face conditions on the flipped coordinates.
pub fn flip_coordinates(m: &MapSpec, flip_set: &[usize]) -> Result<MapSpec> {
    if let Some(&i) = flip_set.iter().find(|&&i| i >= m.dim()) {
        return Err(Error::IndexOutOfRange { index: i, dim: m.dim() });
    }
    Ok(m.map_components(|i, g| {
        flip_set.contains(&i).then(|| {
            Expr::binary(
                BinOp::Sub,
                Expr::binary(BinOp::Mul, Expr::constant(2.0), Expr::Var(i)),
                g.clone(),
            )
        })
    }))
}

/// `S(t, x) = (2t - T_1(t, x), T_2(t, x))`: turns the compressive cylinder
/// conditions for `T` into the expansive ones for `S`.
pub fn compressive_to_expansive(m: &MapSpec) -> Result<MapSpec> {
    flip_coordinates(m, &[0])
}

/// The cylinder `[a, b] x A` with a box base `A`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CylinderSpec {
    pub t_range: Interval,
    pub base: IntervalBox,
}

impl CylinderSpec {
    pub fn new(t_range: Interval, base: IntervalBox) -> Result<Self> {
        if t_range.width() <= 0.0 {
            return Err(Error::InvalidDomain("cylinder height needs a < b".into()));
        }
        Ok(Self { t_range, base })
    }

    /// Total dimension `1 + dim(A)`.
    pub fn dim(&self) -> usize {
        1 + self.base.dim()
    }

    pub fn as_box(&self) -> IntervalBox {
        self.base.prepend(self.t_range)
    }

    /// `{a} x A`.
    pub fn left_base(&self) -> IntervalBox {
        self.base.prepend(Interval::point(self.t_range.lo()))
    }

    /// `{b} x A`.
    pub fn right_base(&self) -> IntervalBox {
        self.base.prepend(Interval::point(self.t_range.hi()))
    }
}

/// Positively homogeneous functional on the nonnegative orthant.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "coefficients")]
pub enum Functional {
    Euclid,
    Sup,
    Linear(Vec<f64>),
}

impl Functional {
    pub fn name(&self) -> String {
        match self {
            Functional::Euclid => "euclid".into(),
            Functional::Sup => "sup".into(),
            Functional::Linear(c) if c.iter().all(|&v| v == 1.0) => "sum".into(),
            Functional::Linear(c) => format!(
                "linear({})",
                c.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(",")
            ),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Functional::Euclid => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Functional::Sup => x.iter().fold(0.0, |m, v| m.max(v.abs())),
            Functional::Linear(c) => c.iter().zip(x).map(|(a, b)| a * b).sum(),
        }
    }

    pub fn eval_interval(&self, x: &[Interval]) -> Result<Interval> {
        Ok(match self {
            Functional::Euclid => {
                let mut acc = Interval::point(0.0);
                for v in x {
                    acc = acc.add(v.sqr()?)?;
                }
                acc.sqrt()?
            }
            Functional::Sup => {
                x.iter().fold(Interval::point(0.0), |m, v| m.max(v.abs()))
            }
            Functional::Linear(c) => {
                let mut acc = Interval::point(0.0);
                for (a, v) in c.iter().zip(x) {
                    acc = acc.add(Interval::point(*a).mul(*v)?)?;
                }
                acc
            }
        })
    }
}

/// The shell `K_{a,b} = {x in K : a <= l(x) <= b}` of the orthant cone `K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeShellSpec {
    pub dim: usize,
    pub functional: Functional,
    pub a: f64,
    pub b: f64,
}

impl ConeShellSpec {
    pub fn new(dim: usize, functional: Functional, a: f64, b: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDomain("cone dimension must be positive".into()));
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidDomain("cone shell needs a < b".into()));
        }
        match &functional {
            Functional::Linear(c) => {
                if c.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: c.len() });
                }
                if c.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
                    return Err(Error::UnsupportedFunctional(
                        "linear functionals need strictly positive coefficients".into(),
                    ));
                }
                if a < 0.0 {
                    return Err(Error::InvalidDomain("cone shell needs a >= 0".into()));
                }
            }
            _ => {
                if a <= 0.0 {
                    return Err(Error::InvalidDomain("norm shells need 0 < a".into()));
                }
            }
        }
        Ok(Self { dim, functional, a, b })
    }

    /// Sum functional `l(x) = x_1 + ... + x_n`.
    pub fn sum(dim: usize, a: f64, b: f64) -> Result<Self> {
        Self::new(dim, Functional::Linear(vec![1.0; dim]), a, b)
    }

    /// A box in the orthant containing every `x >= 0` with `l(x) <= level`.
    pub fn sublevel_box(&self, level: f64) -> IntervalBox {
        let coords = (0..self.dim)
            .map(|i| {
                let hi = match &self.functional {
                    Functional::Euclid | Functional::Sup => level,
                    Functional::Linear(c) => Interval::point(level)
                        .div(Interval::point(c[i]))
                        .map(|q| q.hi())
                        .unwrap_or(level / c[i]),
                };
                Interval::new(0.0, hi).expect("level >= 0")
            })
            .collect();
        IntervalBox::new(coords).expect("dim >= 1")
    }

    pub fn in_orthant(p: &[f64]) -> bool {
        p.iter().all(|&v| v >= 0.0)
    }
}

/// `r_a(x) = a (x + (a - l(x))^2 y) / l(x + (a - l(x))^2 y)`, a retraction
/// of the orthant onto the level set `{l = a}`.
pub fn cone_retraction(p: &[f64], level: f64, spec: &ConeShellSpec, y: &[f64]) -> Result<Vec<f64>> {
    if p.len() != spec.dim || y.len() != spec.dim {
        return Err(Error::DimensionMismatch { expected: spec.dim, found: p.len().min(y.len()) });
    }
    if !ConeShellSpec::in_orthant(p) || !ConeShellSpec::in_orthant(y) {
        return Err(Error::InvalidArgument("retraction points must lie in the orthant".into()));
    }
    if !(level > 0.0) {
        return Err(Error::InvalidArgument("retraction level must be positive".into()));
    }
    let l = &spec.functional;
    if !(l.eval(y) > 0.0) {
        return Err(Error::InvalidArgument("direction y needs l(y) > 0".into()));
    }
    let gap = level - l.eval(p);
    let w: Vec<f64> = p.iter().zip(y).map(|(x, yi)| x + gap * gap * yi).collect();
    let lw = l.eval(&w);
    if !(lw > 0.0) {
        return Err(Error::ZeroDenominator("cone retraction"));
    }
    let scale = level / lw;
    Ok(w.iter().map(|v| v * scale).collect())
}

/// `h(x) = (l(x), x / l(x))`, mapping the shell onto `[a, b] x {l = 1}`.
pub fn shell_homeomorphism(p: &[f64], spec: &ConeShellSpec) -> Result<(f64, Vec<f64>)> {
    if p.len() != spec.dim {
        return Err(Error::DimensionMismatch { expected: spec.dim, found: p.len() });
    }
    let l = spec.functional.eval(p);
    if !ConeShellSpec::in_orthant(p) || l < spec.a || l > spec.b || l <= 0.0 {
        return Err(Error::OutsideShell);
    }
    Ok((l, p.iter().map(|v| v / l).collect()))
}

/// Inverse of [`shell_homeomorphism`]: `(t, u) -> t u`.
pub fn shell_homeomorphism_inv(t: f64, u: &[f64], spec: &ConeShellSpec) -> Result<Vec<f64>> {
    if u.len() != spec.dim {
        return Err(Error::DimensionMismatch { expected: spec.dim, found: u.len() });
    }
    let lu = spec.functional.eval(u);
    if t < spec.a || t > spec.b || !ConeShellSpec::in_orthant(u) || (lu - 1.0).abs() > 1e-12 {
        return Err(Error::OutsideShell);
    }
    Ok(u.iter().map(|v| t * v).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hole {
    pub center: [f64; 2],
    pub radius: f64,
}

/// The planar set `L = B[0, R] minus the open holes`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HoledBallSpec {
    #[serde(rename = "R")]
    pub outer_radius: f64,
    pub holes: Vec<Hole>,
}

fn dist_interval(p: [f64; 2], q: [f64; 2]) -> Result<Interval> {
    let dx = Interval::point(p[0]).sub(Interval::point(q[0]))?;
    let dy = Interval::point(p[1]).sub(Interval::point(q[1]))?;
    Ok(dx.sqr()?.add(dy.sqr()?)?.sqrt()?)
}

impl HoledBallSpec {
    /// Validates disjointness and containment of the holes. A single hole
    /// is refused: the index `1 - 1` is zero and nothing follows.
    pub fn new(outer_radius: f64, holes: Vec<Hole>) -> Result<Self> {
        if !(outer_radius > 0.0 && outer_radius.is_finite()) {
            return Err(Error::InvalidDomain("outer radius must be positive".into()));
        }
        if holes.len() == 1 {
            return Err(Error::SingleHole);
        }
        for (i, h) in holes.iter().enumerate() {
            if !(h.radius > 0.0) {
                return Err(Error::InvalidDomain(format!("hole {} has non-positive radius", i + 1)));
            }
            let reach = dist_interval(h.center, [0.0, 0.0])?.add(Interval::point(h.radius))?;
            if reach.hi() >= outer_radius {
                return Err(Error::InvalidDomain(format!(
                    "hole {} is not strictly inside B[0, R]",
                    i + 1
                )));
            }
            for (j, k) in holes.iter().enumerate().skip(i + 1) {
                let d = dist_interval(h.center, k.center)?;
                let gap = Interval::point(h.radius).add(Interval::point(k.radius))?;
                if d.lo() <= gap.hi() {
                    return Err(Error::InvalidDomain(format!(
                        "holes {} and {} are not disjoint",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { outer_radius, holes })
    }

    /// `1 - (number of holes)`, the index of a map satisfying the boundary
    /// conditions on the interior of `L`.
    pub fn index_formula(&self) -> i64 {
        1 - self.holes.len() as i64
    }
}

/// Enclosure of `{c + r (cos 2 pi s, sin 2 pi s) : s in s_range}`.
pub(crate) fn circle_arc_box(center: [f64; 2], radius: f64, s_range: Interval) -> Result<IntervalBox> {
    let pi = Interval::new(std::f64::consts::PI, std::f64::consts::PI.next_up())?;
    let theta = Interval::point(2.0).mul(pi)?.mul(s_range)?;
    let r = Interval::point(radius);
    let x = Interval::point(center[0]).add(r.mul(theta.cos()?)?)?;
    let y = Interval::point(center[1]).add(r.mul(theta.sin()?)?)?;
    Ok(IntervalBox::new(vec![x, y])?)
}

/// Any of the supported theorem domains.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DomainSpec {
    Rect(RectDomain),
    Cylinder(CylinderSpec),
    #[serde(rename = "coneshell")]
    ConeShell(ConeShellSpec),
    #[serde(rename = "holedball")]
    HoledBall(HoledBallSpec),
}

impl DomainSpec {
    /// Ambient dimension of the domain.
    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Rect(r) => r.dim(),
            DomainSpec::Cylinder(c) => c.dim(),
            DomainSpec::ConeShell(s) => s.dim,
            DomainSpec::HoledBall(_) => 2,
        }
    }
}

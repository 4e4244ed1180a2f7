//! Fixed point index `deg(Id - f)` in dimensions 1 and 2.
//!
//! In the plane the boundary is cut into segments whose image under
//! `F = Id - f` provably lies in one of the four open half-planes
//! `F1 > 0`, `F2 > 0`, `F1 < 0`, `F2 < 0`. Consecutive segments share a
//! boundary point, so their half-planes overlap and the labels advance by at
//! most a quarter turn. Summing the signed quarter turns gives four times
//! the winding number.

use rayon::prelude::*;
use serde::Serialize;

use crate::certify::DEFAULT_MAX_DEPTH;
use crate::error::{Error, Result};
use crate::geometry::{circle_arc_box, HoledBallSpec, RectDomain};
use crate::interval::{Interval, IntervalBox};
use crate::mapdsl::{EvalError, MapSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeResult {
    pub value: i64,
    /// True iff `F` was proven nonzero on the whole boundary.
    pub verified: bool,
    pub segments: usize,
    pub depth: usize,
    /// Boundary segments with their enclosures of `F`.
    #[serde(skip)]
    pub boundary_evidence: Vec<(IntervalBox, IntervalBox)>,
}

/// `F = x - f(x)` on a box of points.
fn field(f: &MapSpec, pts: &IntervalBox, t: Option<Interval>) -> std::result::Result<IntervalBox, EvalError> {
    let img = f.eval_interval_strict(pts, t)?;
    let coords = pts
        .coords()
        .iter()
        .zip(img.coords())
        .map(|(x, y)| x.sub(*y))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(IntervalBox::new(coords).expect("nonempty"))
}

fn transient(e: &EvalError) -> bool {
    matches!(e, EvalError::PartialDomain(_) | EvalError::NonFinite(_) | EvalError::Interval(_))
}

/// Sign of `x - f(x)` at an endpoint, or `None` if zero is not excluded.
fn endpoint_sign(f: &MapSpec, x: f64) -> Result<Option<i64>> {
    let p = IntervalBox::from_point(&[x])?;
    let v = field(f, &p, None).map_err(|e| Error::eval(format!("x = {x}"), e))?;
    let v = v.coord(0);
    Ok(if v.lo() > 0.0 {
        Some(1)
    } else if v.hi() < 0.0 {
        Some(-1)
    } else {
        None
    })
}

fn require_defined(f: &MapSpec, region: &IntervalBox, max_depth: usize) -> Result<()> {
    let check = crate::certify::miranda::definedness(f, region, None, max_depth, "region")?;
    match check.status {
        crate::certify::cover::CoverStatus::Verified => Ok(()),
        _ => Err(Error::eval(
            format!("region {region}"),
            EvalError::PartialDomain("map could not be shown defined on the region"),
        )),
    }
}

/// Index of `f` on the open interval `(a, b)` from the signs of `x - f(x)`.
pub fn degree_1d(f: &MapSpec, r: &RectDomain) -> Result<DegreeResult> {
    if f.dim() != 1 || r.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: f.dim().max(r.dim()) });
    }
    require_defined(f, r.as_box(), DEFAULT_MAX_DEPTH)?;
    let iv = r.as_box().coord(0);
    let (Some(sa), Some(sb)) = (endpoint_sign(f, iv.lo())?, endpoint_sign(f, iv.hi())?) else {
        return Err(Error::BoundaryZero);
    };
    let value = match (sa, sb) {
        (-1, 1) => 1,
        (1, -1) => -1,
        _ => 0,
    };
    Ok(DegreeResult { value, verified: true, segments: 2, depth: 0, boundary_evidence: Vec::new() })
}

type Piece<'a> = Box<dyn Fn(Interval) -> Result<IntervalBox> + Sync + 'a>;

fn half_plane(v: &IntervalBox) -> Option<u8> {
    let (a, b) = (v.coord(0), v.coord(1));
    if a.lo() > 0.0 {
        Some(0)
    } else if b.lo() > 0.0 {
        Some(1)
    } else if a.hi() < 0.0 {
        Some(2)
    } else if b.hi() < 0.0 {
        Some(3)
    } else {
        None
    }
}

struct Walk {
    labels: Vec<u8>,
    evidence: Vec<(IntervalBox, IntervalBox)>,
    depth: usize,
}

/// Subdivides one parametrized boundary piece, in parameter order, until
/// every segment carries a half-plane label.
fn walk_piece(f: &MapSpec, piece: &Piece<'_>, t: Option<Interval>, max_depth: usize) -> Result<Walk> {
    let mut out = Walk { labels: Vec::new(), evidence: Vec::new(), depth: 0 };
    let mut stack = vec![(Interval::new(0.0, 1.0)?, 0usize)];
    while let Some((s, d)) = stack.pop() {
        out.depth = out.depth.max(d);
        let pts = piece(s)?;
        let label = match field(f, &pts, t) {
            Ok(v) => half_plane(&v).map(|l| (l, v)),
            Err(e) if transient(&e) => None,
            Err(e) => return Err(Error::eval(format!("boundary segment {pts}"), e)),
        };
        match label {
            Some((l, v)) => {
                out.labels.push(l);
                out.evidence.push((pts, v));
            }
            None => {
                if d >= max_depth {
                    return Err(Error::BoundaryZeroOrIndeterminate { depth: max_depth });
                }
                let m = s.midpoint();
                // Right half first so the left half is processed next.
                stack.push((Interval::new(m, s.hi())?, d + 1));
                stack.push((Interval::new(s.lo(), m)?, d + 1));
            }
        }
    }
    Ok(out)
}

/// Winding number of `F = Id - f` along the closed curve formed by
/// `pieces` in order.
fn winding(f: &MapSpec, pieces: &[Piece<'_>], t: Option<Interval>, max_depth: usize) -> Result<DegreeResult> {
    let walks: Vec<Walk> = pieces
        .par_iter()
        .map(|p| walk_piece(f, p, t, max_depth))
        .collect::<Result<_>>()?;
    let labels: Vec<u8> = walks.iter().flat_map(|w| w.labels.iter().copied()).collect();
    let mut quarter_turns: i64 = 0;
    for k in 0..labels.len() {
        let (a, b) = (labels[k], labels[(k + 1) % labels.len()]);
        quarter_turns += match (b + 4 - a) % 4 {
            0 => 0,
            1 => 1,
            3 => -1,
            _ => return Err(Error::BoundaryZeroOrIndeterminate { depth: max_depth }),
        };
    }
    if quarter_turns % 4 != 0 {
        return Err(Error::BoundaryZeroOrIndeterminate { depth: max_depth });
    }
    Ok(DegreeResult {
        value: quarter_turns / 4,
        verified: true,
        segments: labels.len(),
        depth: walks.iter().map(|w| w.depth).max().unwrap_or(0),
        boundary_evidence: walks.into_iter().flat_map(|w| w.evidence).collect(),
    })
}

fn lerp(a: f64, b: f64, s: Interval) -> Result<Interval> {
    let w = Interval::point(b).sub(Interval::point(a))?;
    Ok(Interval::point(a).add(w.mul(s)?)?)
}

/// Counterclockwise edges of a rectangle.
fn rect_pieces(r: &RectDomain) -> Vec<Piece<'static>> {
    let b = r.as_box();
    let (x0, x1) = (b.coord(0).lo(), b.coord(0).hi());
    let (y0, y1) = (b.coord(1).lo(), b.coord(1).hi());
    let edge = move |(ax, ay): (f64, f64), (bx, by): (f64, f64)| -> Piece<'static> {
        Box::new(move |s| Ok(IntervalBox::new(vec![lerp(ax, bx, s)?, lerp(ay, by, s)?])?))
    };
    vec![
        edge((x0, y0), (x1, y0)),
        edge((x1, y0), (x1, y1)),
        edge((x1, y1), (x0, y1)),
        edge((x0, y1), (x0, y0)),
    ]
}

fn circle_piece(center: [f64; 2], radius: f64) -> Vec<Piece<'static>> {
    vec![Box::new(move |s| circle_arc_box(center, radius, s))]
}

fn check_planar(f: &MapSpec) -> Result<()> {
    if f.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: f.dim() });
    }
    Ok(())
}

/// Index of `f` on the interior of the rectangle `r`, as the winding number
/// of `Id - f` along its boundary. `f` must be shown defined on `r`.
pub fn winding_degree_2d(f: &MapSpec, r: &RectDomain, max_depth: usize) -> Result<DegreeResult> {
    check_planar(f)?;
    if r.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: r.dim() });
    }
    require_defined(f, r.as_box(), max_depth)?;
    winding(f, &rect_pieces(r), None, max_depth)
}

/// Winding number of `Id - f` along the circle `|x - center| = radius`,
/// counterclockwise.
pub fn winding_on_circle(f: &MapSpec, center: [f64; 2], radius: f64, max_depth: usize) -> Result<DegreeResult> {
    check_planar(f)?;
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    winding(f, &circle_piece(center, radius), None, max_depth)
}

/// Index of `f` on the interior of a holed disc: the outer winding minus
/// the windings around each hole.
pub fn holed_ball_index(f: &MapSpec, spec: &HoledBallSpec, max_depth: usize) -> Result<DegreeResult> {
    let mut total = winding_on_circle(f, [0.0, 0.0], spec.outer_radius, max_depth)?;
    for h in &spec.holes {
        let w = winding_on_circle(f, h.center, h.radius, max_depth)?;
        total.value -= w.value;
        total.segments += w.segments;
        total.depth = total.depth.max(w.depth);
        total.boundary_evidence.extend(w.boundary_evidence);
    }
    Ok(total)
}

/// Index of `f` on the interior of `r` in dimension 1 or 2.
pub fn fixed_point_index(f: &MapSpec, r: &RectDomain) -> Result<DegreeResult> {
    if f.has_param() {
        return Err(Error::InvalidArgument("map depends on t; fix the parameter first".into()));
    }
    match r.dim() {
        1 => degree_1d(f, r),
        2 => winding_degree_2d(f, r, DEFAULT_MAX_DEPTH),
        n => Err(Error::UnsupportedDimension(n)),
    }
}

/// Verifies that `x - h(t, x)` vanishes nowhere on the boundary of `r` for
/// any `t` in `[0, 1]`, by subdividing the product of the boundary
/// parameter and `t`. Returns the number of cells used.
pub fn verify_homotopy(h: &MapSpec, r: &RectDomain, max_depth: usize) -> Result<usize> {
    if !h.has_param() {
        return Err(Error::InvalidArgument("homotopy needs 'param t'".into()));
    }
    if h.dim() != r.dim() {
        return Err(Error::DimensionMismatch { expected: r.dim(), found: h.dim() });
    }
    let pieces: Vec<Piece<'static>> = match r.dim() {
        1 => {
            let iv = r.as_box().coord(0);
            [iv.lo(), iv.hi()]
                .into_iter()
                .map(|x| -> Piece<'static> { Box::new(move |_| Ok(IntervalBox::from_point(&[x])?)) })
                .collect()
        }
        2 => rect_pieces(r),
        n => return Err(Error::UnsupportedDimension(n)),
    };
    let unit = Interval::new(0.0, 1.0)?;
    let counts: Vec<usize> = pieces
        .par_iter()
        .map(|piece| {
            let mut cells = 0usize;
            let mut stack = vec![(unit, unit, 0usize)];
            while let Some((s, t, d)) = stack.pop() {
                cells += 1;
                let pts = piece(s)?;
                let excluded = match field(h, &pts, Some(t)) {
                    Ok(v) => v.coords().iter().any(|c| !c.contains_zero()),
                    Err(e) if transient(&e) => false,
                    Err(e) => return Err(Error::eval(format!("boundary segment {pts}"), e)),
                };
                if excluded {
                    continue;
                }
                if d >= 2 * max_depth {
                    return Err(Error::BoundaryZeroOrIndeterminate { depth: max_depth });
                }
                let split_s = r.dim() == 2 && s.width() >= t.width();
                let (a, b) = if split_s { (s, t) } else { (t, s) };
                let m = a.midpoint();
                for half in [Interval::new(a.lo(), m)?, Interval::new(m, a.hi())?] {
                    if split_s {
                        stack.push((half, b, d + 1));
                    } else {
                        stack.push((b, half, d + 1));
                    }
                }
            }
            Ok(cells)
        })
        .collect::<Result<_>>()?;
    Ok(counts.into_iter().sum())
}

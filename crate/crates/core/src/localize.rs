//! Branch-and-prune localization of fixed points, and the crossing rule for
//! piecewise-linear paths.

use std::cmp::Ordering;
use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::certify::{certify_cone_shell, miranda_core, Directions, Form};
use crate::error::{Error, Result};
use crate::geometry::{ConeShellSpec, Functional, RectDomain};
use crate::interval::{Interval, IntervalBox};
use crate::mapdsl::{eval_expr_interval, BinOp, EvalError, Expr, MapSpec};

/// Subdivision depth of the Miranda check run on each surviving leaf.
pub const LEAF_MIRANDA_DEPTH: usize = 10;

const PARALLEL_THRESHOLD: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EnclosureStatus {
    /// A fixed point provably lies in the region.
    Proven,
    /// The region could not be excluded.
    Candidate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Enclosure {
    #[serde(rename = "box")]
    pub region: IntervalBox,
    pub status: EnclosureStatus,
    /// Bound on `max_i |g_i(x) - x_i|` over the box, `None` where the map
    /// could not be evaluated.
    pub residual: Option<Interval>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub struct Coverage {
    pub total_volume: f64,
    pub discarded_volume: f64,
    pub surviving_volume: f64,
    pub boxes_examined: usize,
    pub discarded_boxes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalizeReport {
    pub enclosures: Vec<Enclosure>,
    /// Set when the box budget ran out. The unprocessed boxes are then
    /// reported as candidates.
    pub budget_exhausted: bool,
    pub coverage: Coverage,
}

impl LocalizeReport {
    pub fn proven(&self) -> impl Iterator<Item = &Enclosure> {
        self.enclosures.iter().filter(|e| e.status == EnclosureStatus::Proven)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Partial derivatives of a map, one map per variable, when every
/// component is smooth.
struct Jacobian {
    columns: Vec<MapSpec>,
}

impl Jacobian {
    fn new(g: &MapSpec) -> Option<Self> {
        let columns = (0..g.dim())
            .map(|j| {
                let comps = g.components().iter().map(|c| c.derivative(j)).collect::<Option<Vec<_>>>()?;
                MapSpec::from_components(g.dim(), g.has_param(), comps).ok()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Jacobian { columns })
    }

    /// Mean-value enclosure of `g(x) - x` over `b`, expanded around the
    /// midpoint. Requires `g` and its derivatives to be defined on all of `b`.
    fn residual_bound(&self, g: &MapSpec, b: &IntervalBox, t: Option<Interval>) -> Option<Vec<Interval>> {
        g.eval_interval_strict(b, t).ok()?;
        let m = b.midpoint();
        let mid = IntervalBox::from_point(&m).ok()?;
        let gm = g.eval_interval_strict(&mid, t).ok()?;
        let mut acc = (0..b.dim())
            .map(|i| gm.coord(i).sub(Interval::point(m[i])).ok())
            .collect::<Option<Vec<_>>>()?;
        for (j, col) in self.columns.iter().enumerate() {
            let dj = col.eval_interval_strict(b, t).ok()?;
            let step = b.coord(j).sub(Interval::point(m[j])).ok()?;
            for (i, a) in acc.iter_mut().enumerate() {
                let mut d = dj.coord(i);
                if i == j {
                    d = d.sub(Interval::point(1.0)).ok()?;
                }
                *a = a.add(d.mul(step).ok()?).ok()?;
            }
        }
        Some(acc)
    }
}

/// True when `g(x) = x` is impossible on `b` for every parameter in `t`.
fn excluded(g: &MapSpec, jac: Option<&Jacobian>, b: &IntervalBox, t: Option<Interval>) -> bool {
    match g.eval_interval(b, t) {
        Ok(img) => {
            let naive = (0..b.dim()).any(|i| {
                img.coord(i).sub(b.coord(i)).map(|d| !d.contains_zero()).unwrap_or(false)
            });
            naive
                || jac
                    .and_then(|j| j.residual_bound(g, b, t))
                    .is_some_and(|r| r.iter().any(|d| !d.contains_zero()))
        }
        // some sub-expression is undefined on the whole box
        Err(EvalError::Domain(_)) => true,
        Err(_) => false,
    }
}

fn residual(g: &MapSpec, b: &IntervalBox, t: Option<Interval>) -> Option<Interval> {
    let img = g.eval_interval(b, t).ok()?;
    let mut worst: Option<Interval> = None;
    for i in 0..b.dim() {
        let d = img.coord(i).sub(b.coord(i)).ok()?.abs();
        worst = Some(worst.map_or(d, |w| w.max(d)));
    }
    worst
}

/// Replaces each cluster of touching leaves by its hull when the cluster
/// tiles the hull exactly and the hull is at most `tol` wide.
fn merge_touching(mut leaves: Vec<IntervalBox>, tol: f64) -> Vec<IntervalBox> {
    leaves.sort_by(by_lower_corner);
    let n = leaves.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            // sorted by lower corner: later boxes cannot reach back past this one
            if leaves[j].coord(0).lo() > leaves[i].coord(0).hi() {
                break;
            }
            if leaves[i].intersects(&leaves[j]) {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = root(&mut parent, i);
        clusters[r].push(i);
    }
    let mut out = Vec::with_capacity(n);
    for members in clusters.into_iter().filter(|c| !c.is_empty()) {
        let hull = members[1..].iter().fold(leaves[members[0]].clone(), |h, &k| h.hull(&leaves[k]));
        let volume: f64 = members.iter().map(|&k| leaves[k].volume()).sum();
        let hv = hull.volume();
        if members.len() > 1 && hull.width() <= tol && (hv - volume).abs() <= 1e-12 * hv {
            out.push(hull);
        } else {
            out.extend(members.into_iter().map(|k| leaves[k].clone()));
        }
    }
    out
}

fn by_lower_corner(a: &IntervalBox, b: &IntervalBox) -> Ordering {
    a.lower_corner().partial_cmp(&b.lower_corner()).unwrap_or(Ordering::Equal)
}

/// Encloses the fixed points of `g` in `r`. Boxes are discarded when some
/// component of `g(X) - X` (naive or mean-value form) excludes zero and are
/// otherwise bisected down to width `tol / 2`. Touching leaves that exactly
/// tile a box of width at most `tol` are reported as that box. Enclosures
/// become `PROVEN` when the Miranda conditions hold on them. `budget` caps the number of boxes examined.
pub fn localize_fixed_points(
    g: &MapSpec,
    r: &RectDomain,
    tol: f64,
    budget: usize,
) -> Result<LocalizeReport> {
    if g.has_param() {
        return Err(Error::InvalidArgument("map depends on t; fix the parameter first".into()));
    }
    localize_core(g, r, tol, budget, None)
}

/// [`localize_fixed_points`] for a parametrized map, with the parameter
/// ranging over the interval `t`. Discarded boxes hold no fixed point for
/// any parameter in `t`; `PROVEN` leaves hold one for every parameter.
pub(crate) fn localize_core(
    g: &MapSpec,
    r: &RectDomain,
    tol: f64,
    budget: usize,
    t: Option<Interval>,
) -> Result<LocalizeReport> {
    if g.dim() != r.dim() {
        return Err(Error::DimensionMismatch { expected: r.dim(), found: g.dim() });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    let jac = Jacobian::new(g);
    let leaf_width = tol / 2.0;
    let mut cov = Coverage { total_volume: r.as_box().volume(), ..Coverage::default() };
    let mut level = vec![r.as_box().clone()];
    let mut leaves = Vec::new();
    let mut overflow = Vec::new();
    while !level.is_empty() {
        let room = budget - cov.boxes_examined;
        if room == 0 {
            overflow = level;
            break;
        }
        let rest = if level.len() > room { level.split_off(room) } else { Vec::new() };
        let keep: Vec<bool> = if level.len() >= PARALLEL_THRESHOLD {
            level.par_iter().map(|b| !excluded(g, jac.as_ref(), b, t)).collect()
        } else {
            level.iter().map(|b| !excluded(g, jac.as_ref(), b, t)).collect()
        };
        cov.boxes_examined += level.len();
        let mut next = Vec::new();
        for (b, k) in level.into_iter().zip(keep) {
            if !k {
                cov.discarded_volume += b.volume();
                cov.discarded_boxes += 1;
            } else if b.width() <= leaf_width {
                leaves.push(b);
            } else {
                match b.bisect_widest() {
                    Ok((lo, hi)) => {
                        next.push(lo);
                        next.push(hi);
                    }
                    // no float strictly inside: cannot refine further
                    Err(_) => leaves.push(b),
                }
            }
        }
        if !rest.is_empty() {
            overflow = next;
            overflow.extend(rest);
            break;
        }
        level = next;
    }

    let check_leaf = |b: &IntervalBox| {
        let proven = RectDomain::new(b.clone())
            .ok()
            .and_then(|rd| miranda_core(g, &rd, &Directions::Auto, LEAF_MIRANDA_DEPTH, t).ok())
            .is_some_and(|c| c.is_certified());
        Enclosure {
            region: b.clone(),
            status: if proven { EnclosureStatus::Proven } else { EnclosureStatus::Candidate },
            residual: residual(g, b, t),
        }
    };
    let leaves = merge_touching(leaves, tol);
    let mut enclosures: Vec<Enclosure> = if leaves.len() >= PARALLEL_THRESHOLD {
        leaves.par_iter().map(check_leaf).collect()
    } else {
        leaves.iter().map(check_leaf).collect()
    };
    let budget_exhausted = !overflow.is_empty();
    enclosures.extend(overflow.into_iter().map(|b| Enclosure {
        residual: residual(g, &b, t),
        region: b,
        status: EnclosureStatus::Candidate,
    }));
    cov.surviving_volume = enclosures.iter().map(|e| e.region.volume()).sum();
    enclosures.sort_by(|a, b| by_lower_corner(&a.region, &b.region));
    Ok(LocalizeReport { enclosures, budget_exhausted, coverage: cov })
}

/// A level band `{x >= 0 : l(x) in level}` of a cone shell that was not
/// shown free of fixed points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShellEnclosure {
    pub level: Interval,
    /// Box containing the whole band.
    #[serde(rename = "box")]
    pub region: IntervalBox,
    /// `PROVEN` when the cone shell conditions hold on the band itself.
    pub status: EnclosureStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShellReport {
    pub enclosures: Vec<ShellEnclosure>,
    pub budget_exhausted: bool,
    /// Total length of the level bands shown free of fixed points.
    pub excluded_length: f64,
    pub bands_examined: usize,
    pub pieces_examined: usize,
}

impl ShellReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// For `l(x) = c . x`, points of the shell are written `x = t u(v)` with
/// `t = l(x)` and `u(v) = (v, (1 - c' . v) / c_n)` on the unit slice.
/// `phi(t, v) = l(g(x)) - t` vanishes at every fixed point.
struct Slicing {
    coeffs: Vec<f64>,
    x_of: Vec<Expr>,
    phi: Expr,
    grad: Option<Vec<Expr>>,
    v_root: Vec<Interval>,
}

impl Slicing {
    fn new(g: &MapSpec, c: &[f64]) -> Result<Slicing> {
        let n = c.len();
        let mul = |a: Expr, b: Expr| Expr::binary(BinOp::Mul, a, b);
        let mut x_of: Vec<Expr> = (0..n - 1).map(|i| mul(Expr::Var(0), Expr::Var(i + 1))).collect();
        let mut rest = Expr::constant(1.0);
        for (i, &ci) in c.iter().enumerate().take(n - 1) {
            rest = Expr::binary(BinOp::Sub, rest, mul(Expr::constant(ci), Expr::Var(i + 1)));
        }
        x_of.push(mul(Expr::Var(0), Expr::binary(BinOp::Div, rest, Expr::constant(c[n - 1]))));
        let mut phi = Expr::Neg(Box::new(Expr::Var(0)));
        for (ci, comp) in c.iter().zip(g.components()) {
            let term = mul(Expr::constant(*ci), comp.substitute_vars(&x_of));
            phi = Expr::binary(BinOp::Add, term, phi);
        }
        let grad = (0..n).map(|k| phi.derivative(k)).collect();
        let v_root = c[..n - 1]
            .iter()
            .map(|&ci| {
                let hi = Interval::point(1.0).div(Interval::point(ci))?.hi();
                Interval::new(0.0, hi)
            })
            .collect::<std::result::Result<_, _>>()?;
        Ok(Slicing { coeffs: c.to_vec(), x_of, phi, grad, v_root })
    }

    /// True when the piece misses the slice `u_n >= 0`.
    fn outside(&self, p: &[Interval]) -> bool {
        let mut acc = Interval::point(0.0);
        for (i, &ci) in self.coeffs.iter().enumerate().take(self.coeffs.len() - 1) {
            match Interval::point(ci).mul(p[i + 1]).and_then(|v| acc.add(v)) {
                Ok(v) => acc = v,
                Err(_) => return false,
            }
        }
        acc.lo() > 1.0
    }

    /// Box in `x` containing the shell points of the piece.
    fn x_box(&self, p: &[Interval]) -> Option<IntervalBox> {
        let coords = self
            .x_of
            .iter()
            .map(|e| {
                let v = eval_expr_interval(e, p, false).ok()?;
                if v.hi() < 0.0 {
                    return None;
                }
                Interval::new(v.lo().max(0.0), v.hi()).ok()
            })
            .collect::<Option<Vec<_>>>()?;
        IntervalBox::new(coords).ok()
    }

    /// Mean-value enclosure of `phi` over the piece, expanded around its
    /// midpoint along the axes in `axes`; the remaining axes must be points.
    /// Also returns `|dphi/dp_k| * width_k` per axis.
    fn mean_value(&self, p: &[Interval], axes: std::ops::Range<usize>) -> Option<(Interval, Vec<f64>)> {
        let grad = self.grad.as_ref()?;
        let mid: Vec<Interval> = p.iter().map(|c| Interval::point(c.midpoint())).collect();
        let mut acc = eval_expr_interval(&self.phi, &mid, true).ok()?;
        let mut smear = vec![0.0; p.len()];
        for k in axes {
            let gk = eval_expr_interval(&grad[k], p, true).ok()?;
            acc = acc.add(gk.mul(p[k].sub(mid[k]).ok()?).ok()?).ok()?;
            smear[k] = gk.mag() * p[k].width();
        }
        Some((acc, smear))
    }

    /// Enclosure of `phi` over the piece: the tighter of the naive and the
    /// mean-value forms, plus the per-axis smear when available.
    fn phi_bound(&self, p: &[Interval], axes: std::ops::Range<usize>) -> Option<(Interval, Option<Vec<f64>>)> {
        let naive = eval_expr_interval(&self.phi, p, true).ok();
        let mv = match naive {
            Some(_) => self.mean_value(p, axes),
            None => None,
        };
        let naive = naive.or_else(|| eval_expr_interval(&self.phi, p, false).ok());
        match (naive, mv) {
            (Some(a), Some((b, s))) => {
                let lo = a.lo().max(b.lo());
                let hi = a.hi().min(b.hi());
                // both enclose the same range, so they overlap
                let tight = Interval::new(lo.min(hi), hi.max(lo)).ok()?;
                Some((tight, Some(s)))
            }
            (Some(a), None) => Some((a, None)),
            (None, Some((b, s))) => Some((b, Some(s))),
            (None, None) => None,
        }
    }
}

/// Picks the axis in `1..p.len()` to split: largest smear when known,
/// widest relative to `root` otherwise. `None` when every candidate axis
/// is already at most `min_frac` of its root width.
fn split_axis(p: &[Interval], root: &[Interval], min_frac: f64, smear: Option<&[f64]>) -> Option<usize> {
    let smear = smear.filter(|s| s[1..].iter().any(|&v| v > 0.0));
    (1..p.len())
        .filter(|&k| p[k].width() > root[k - 1].width() * min_frac)
        .map(|k| {
            let score = match smear {
                Some(s) => s[k],
                None => p[k].width() / root[k - 1].width(),
            };
            (k, score)
        })
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
        .map(|(k, _)| k)
}

fn split_at(p: &[Interval], k: usize) -> Option<(Vec<Interval>, Vec<Interval>)> {
    let m = p[k].midpoint();
    if !(m > p[k].lo() && m < p[k].hi()) {
        return None;
    }
    let mut lo = p.to_vec();
    let mut hi = p.to_vec();
    lo[k] = Interval::new(p[k].lo(), m).ok()?;
    hi[k] = Interval::new(m, p[k].hi()).ok()?;
    Some((lo, hi))
}

enum Piece {
    /// Irrelevant, or provably free of fixed points.
    Clear,
    /// Not cleared; split along the axis, or give up when `None`.
    Open(Option<usize>),
}

enum Band {
    Free,
    Occupied,
    Exhausted,
}

struct ShellSearch<'a> {
    g: &'a MapSpec,
    spec: &'a ConeShellSpec,
    slicing: Option<Slicing>,
    budget_left: usize,
    pieces: usize,
}

impl ShellSearch<'_> {
    fn spend(&mut self) -> bool {
        if self.budget_left == 0 {
            return false;
        }
        self.budget_left -= 1;
        self.pieces += 1;
        true
    }

    /// Root piece of a band and the widths of its slice coordinates.
    fn root(&self, band: Interval, slicing: Option<&Slicing>) -> (Vec<Interval>, Vec<Interval>) {
        let slice_root = match slicing {
            Some(s) => s.v_root.clone(),
            None => self.spec.sublevel_box(1.0).into_coords(),
        };
        let mut p = vec![band];
        p.extend(slice_root.iter().copied());
        (p, slice_root)
    }

    fn linear_piece(&self, s: &Slicing, p: &[Interval], root: &[Interval], min_frac: f64) -> Piece {
        if s.outside(p) {
            return Piece::Clear;
        }
        match s.x_box(p) {
            None => return Piece::Clear,
            Some(xb) => {
                if excluded(self.g, None, &xb, None) {
                    return Piece::Clear;
                }
            }
        }
        let (bound, smear) = match s.phi_bound(p, 0..p.len()) {
            Some(v) => v,
            None => return Piece::Open(split_axis(p, root, min_frac, None)),
        };
        if !bound.contains_zero() {
            return Piece::Clear;
        }
        Piece::Open(split_axis(p, root, min_frac, smear.as_deref()))
    }

    /// Generic functionals: `p = (band, U)` with `U` a box in the orthant
    /// whose `l`-range contains 1, covering `x = t u`.
    fn generic_piece(&self, p: &[Interval], root: &[Interval], min_frac: f64) -> Piece {
        let l = &self.spec.functional;
        let band = p[0];
        let u = &p[1..];
        match l.eval_interval(u) {
            Ok(lr) if !lr.contains(1.0) => return Piece::Clear,
            _ => {}
        }
        let coords: Option<Vec<Interval>> = u.iter().map(|c| band.mul(*c).ok()).collect();
        if let Some(xb) = coords.and_then(|c| IntervalBox::new(c).ok()) {
            if excluded(self.g, None, &xb, None) {
                return Piece::Clear;
            }
            // at a fixed point x = t u, l(g(x)) = l(x) = t lies in the band
            if let Ok(img) = self.g.eval_interval(&xb, None) {
                if let Ok(lt) = l.eval_interval(img.coords()) {
                    if !lt.intersects(&band) {
                        return Piece::Clear;
                    }
                }
            }
        }
        Piece::Open(split_axis(p, root, min_frac, None))
    }

    fn band(&mut self, band: Interval) -> Band {
        let (root_piece, root) = self.root(band, self.slicing.as_ref());
        let min_frac = band.width() / (self.spec.b - self.spec.a);
        let mut stack = vec![root_piece];
        while let Some(p) = stack.pop() {
            if !self.spend() {
                return Band::Exhausted;
            }
            let verdict = match &self.slicing {
                Some(s) => self.linear_piece(s, &p, &root, min_frac),
                None => self.generic_piece(&p, &root, min_frac),
            };
            match verdict {
                Piece::Clear => {}
                Piece::Open(None) => return Band::Occupied,
                Piece::Open(Some(k)) => match split_at(&p, k) {
                    Some((lo, hi)) => {
                        stack.push(hi);
                        stack.push(lo);
                    }
                    None => return Band::Occupied,
                },
            }
        }
        Band::Free
    }

    /// Verifies `g(x) >= 0` on the band, with `g` defined throughout.
    fn invariant(&mut self, s: &Slicing, band: Interval) -> bool {
        let (root_piece, root) = self.root(band, Some(s));
        let mut stack = vec![root_piece];
        while let Some(p) = stack.pop() {
            if !self.spend() {
                return false;
            }
            if s.outside(&p) {
                continue;
            }
            let Some(xb) = s.x_box(&p) else { continue };
            let ok = self
                .g
                .eval_interval_strict(&xb, None)
                .is_ok_and(|img| img.coords().iter().all(|c| c.lo() >= 0.0));
            if ok {
                continue;
            }
            match split_axis(&p, &root, 2f64.powi(-30), None).and_then(|k| split_at(&p, k)) {
                Some((lo, hi)) => {
                    stack.push(hi);
                    stack.push(lo);
                }
                None => return false,
            }
        }
        true
    }

    /// Verifies `phi(level, v) <= 0` (or `>= 0` when `upper`) on the slice.
    fn slice_sign(&mut self, s: &Slicing, level: f64, upper: bool) -> bool {
        let (mut root_piece, root) = self.root(Interval::point(level), Some(s));
        root_piece[0] = Interval::point(level);
        let mut stack = vec![root_piece];
        while let Some(p) = stack.pop() {
            if !self.spend() {
                return false;
            }
            if s.outside(&p) {
                continue;
            }
            let bound = s.phi_bound(&p, 1..p.len());
            let holds = bound.as_ref().is_some_and(|(b, _)| if upper { b.lo() >= 0.0 } else { b.hi() <= 0.0 });
            if holds {
                continue;
            }
            let smear = bound.and_then(|(_, s)| s);
            match split_axis(&p, &root, 2f64.powi(-30), smear.as_deref()).and_then(|k| split_at(&p, k)) {
                Some((lo, hi)) => {
                    stack.push(hi);
                    stack.push(lo);
                }
                None => return false,
            }
        }
        true
    }

    /// Cone shell conditions on the sub-shell `l(x) in band`, in either form.
    fn prove(&mut self, band: Interval) -> bool {
        if band.lo() <= 0.0 {
            return false;
        }
        let Some(s) = self.slicing.take() else {
            let Ok(sub) = ConeShellSpec::new(self.spec.dim, self.spec.functional.clone(), band.lo(), band.hi())
            else {
                return false;
            };
            return [Form::Expansive, Form::Compressive].iter().any(|&f| {
                certify_cone_shell(self.g, &sub, f, 12).is_ok_and(|c| c.is_certified())
            });
        };
        let ok = self.invariant(&s, band)
            && ((self.slice_sign(&s, band.lo(), false) && self.slice_sign(&s, band.hi(), true))
                || (self.slice_sign(&s, band.lo(), true) && self.slice_sign(&s, band.hi(), false)));
        self.slicing = Some(s);
        ok
    }
}

/// Localizes fixed points of `g` inside the cone shell by levels of the
/// functional: the range `[a, b]` is bisected into bands until every band
/// is either shown free of fixed points or at most `tol` wide. Adjacent
/// surviving bands are merged and reported with their level range; a band
/// is `PROVEN` when the cone shell conditions hold on it. `budget` caps the
/// number of pieces examined.
///
/// For linear functionals each band is parametrized by the level and a
/// point of the unit slice, which gives second-order enclosures along the
/// slice; other functionals use boxes in the orthant.
pub fn localize_in_shell(g: &MapSpec, spec: &ConeShellSpec, tol: f64, budget: usize) -> Result<ShellReport> {
    if g.has_param() {
        return Err(Error::InvalidArgument("map depends on t; fix the parameter first".into()));
    }
    if g.dim() != spec.dim {
        return Err(Error::DimensionMismatch { expected: spec.dim, found: g.dim() });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let slicing = match &spec.functional {
        Functional::Linear(c) => Some(Slicing::new(g, c)?),
        _ => None,
    };
    let mut search = ShellSearch { g, spec, slicing, budget_left: budget, pieces: 0 };
    let mut queue = VecDeque::from([Interval::new(spec.a, spec.b)?]);
    let mut kept = Vec::new();
    let mut exhausted = false;
    let mut excluded_length = 0.0;
    let mut bands_examined = 0;
    while let Some(band) = queue.pop_front() {
        if exhausted {
            kept.push(band);
            continue;
        }
        bands_examined += 1;
        match search.band(band) {
            Band::Free => excluded_length += band.width(),
            Band::Occupied => {
                let m = band.midpoint();
                if band.width() <= tol || !(m > band.lo() && m < band.hi()) {
                    kept.push(band);
                } else {
                    queue.push_back(Interval::new(band.lo(), m)?);
                    queue.push_back(Interval::new(m, band.hi())?);
                }
            }
            Band::Exhausted => {
                exhausted = true;
                kept.push(band);
            }
        }
    }
    kept.sort_by(|a, b| a.lo().total_cmp(&b.lo()));
    let mut groups: Vec<Interval> = Vec::new();
    for band in kept {
        match groups.last_mut() {
            Some(last) if last.hi() == band.lo() => *last = last.hull(&band),
            _ => groups.push(band),
        }
    }
    let enclosures = groups
        .into_iter()
        .map(|level| {
            let proven = !exhausted && search.prove(level);
            ShellEnclosure {
                level,
                region: spec.sublevel_box(level.hi()),
                status: if proven { EnclosureStatus::Proven } else { EnclosureStatus::Candidate },
            }
        })
        .collect();
    Ok(ShellReport {
        enclosures,
        budget_exhausted: exhausted || search.budget_left == 0,
        excluded_length,
        bands_examined,
        pieces_examined: search.pieces,
    })
}

/// Samples `(s, point)` of a piecewise-linear path with `s` running from 0
/// to 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSamples {
    nodes: Vec<(f64, Vec<f64>)>,
}

impl PathSamples {
    pub fn new(nodes: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidArgument("a path needs at least two nodes".into()));
        }
        if nodes[0].0 != 0.0 || nodes[nodes.len() - 1].0 != 1.0 {
            return Err(Error::InvalidArgument("path parameters must run from 0 to 1".into()));
        }
        if nodes.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::InvalidArgument("path parameters must increase strictly".into()));
        }
        let dim = nodes[0].1.len();
        if let Some((_, p)) = nodes.iter().find(|(_, p)| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
        if nodes.iter().any(|(_, p)| p.iter().any(|v| !v.is_finite())) {
            return Err(Error::InvalidArgument("path points must be finite".into()));
        }
        Ok(PathSamples { nodes })
    }

    /// The straight segment from `p` to `q`.
    pub fn segment(p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        Self::new(vec![(0.0, p), (1.0, q)])
    }

    pub fn nodes(&self) -> &[(f64, Vec<f64>)] {
        &self.nodes
    }

    /// Point of the interpolant at parameter `s` in `[0, 1]`.
    pub fn point_at(&self, s: f64) -> Vec<f64> {
        let k = self.nodes.partition_point(|(sk, _)| *sk <= s).clamp(1, self.nodes.len() - 1);
        let (s0, p0) = &self.nodes[k - 1];
        let (s1, p1) = &self.nodes[k];
        let w = ((s - s0) / (s1 - s0)).clamp(0.0, 1.0);
        p0.iter().zip(p1).map(|(a, b)| a + w * (b - a)).collect()
    }
}

/// Sub-path `[s0, s1]` on which the scalar `h` sweeps `[a, b]` exactly
/// once: `h(s0) = a`, `h(s1) = b` and `a <= h <= b` in between (with the
/// roles of `a` and `b` exchanged when `h` descends from `b` to `a`).
/// `h` is evaluated at the nodes and interpolated linearly. Among several
/// traversals the one with the largest `s0` is returned.
pub fn extract_crossing_subpath<F>(p: &PathSamples, mut h: F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let s: Vec<f64> = p.nodes.iter().map(|(s, _)| *s).collect();
    let values = p.nodes.iter().map(|(_, x)| h(x)).collect::<Result<Vec<_>>>()?;
    crossing_from_values(&s, &values, a, b)
}

/// [`extract_crossing_subpath`] on precomputed node values.
pub fn crossing_from_values(s: &[f64], h: &[f64], a: f64, b: f64) -> Result<(f64, f64)> {
    if s.len() != h.len() || s.len() < 2 {
        return Err(Error::InvalidArgument("need at least two samples of equal length".into()));
    }
    if !(a < b) {
        return Err(Error::NoCrossing(format!("empty target interval [{a}, {b}]")));
    }
    if h.iter().any(|v| !v.is_finite()) {
        return Err(Error::NoCrossing("non-finite sample".into()));
    }
    let last = h.len() - 1;
    if h[0] <= a && h[last] >= b {
        ascending(s, h, a, b)
    } else if h[0] >= b && h[last] <= a {
        let neg: Vec<f64> = h.iter().map(|v| -v).collect();
        ascending(s, &neg, -b, -a)
    } else {
        Err(Error::NoCrossing(format!(
            "h(0) = {} and h(1) = {} do not straddle [{a}, {b}]",
            h[0], h[last]
        )))
    }
}

fn ascending(s: &[f64], h: &[f64], a: f64, b: f64) -> Result<(f64, f64)> {
    let at = |k: usize, level: f64| {
        let w = (level - h[k]) / (h[k + 1] - h[k]);
        if w <= 0.0 {
            s[k]
        } else if w >= 1.0 {
            s[k + 1]
        } else {
            s[k] + w * (s[k + 1] - s[k])
        }
    };
    // latest parameter so far with h <= a
    let mut below = Some(s[0]);
    let mut best = None;
    for k in 0..h.len() - 1 {
        let (h0, h1) = (h[k], h[k + 1]);
        if h1 <= a {
            below = Some(s[k + 1]);
            continue;
        }
        if h0 <= a {
            below = Some(at(k, a));
        }
        if h1 >= b && h0 < b {
            if let Some(s0) = below.take() {
                best = Some((s0, at(k, b)));
            }
        }
    }
    best.ok_or_else(|| Error::NoCrossing("no full traversal of the target interval".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapdsl::parse_map;

    #[test]
    fn cos_fixed_point_is_proven() {
        let g = parse_map("dim 1\nmap g1 = cos(x1)").unwrap();
        let r = RectDomain::from_bounds(&[(0.0, 1.0)]).unwrap();
        let rep = localize_fixed_points(&g, &r, 1e-8, 100_000).unwrap();
        let proven: Vec<_> = rep.proven().collect();
        assert_eq!(proven.len(), 1);
        let b = proven[0].region.coord(0);
        assert!(b.contains(0.7390851332151607));
        assert!(b.width() <= 1e-8);
        assert!(!rep.budget_exhausted);
        let c = rep.coverage;
        assert!(((c.discarded_volume + c.surviving_volume) - c.total_volume).abs() <= 1e-9);
    }

    #[test]
    fn linear_plane_map_is_proven_near_half() {
        let g = parse_map("dim 2\nmap g1 = 2*x1 - 0.5\nmap g2 = 0.25 + 0.5*x2").unwrap();
        let r = RectDomain::from_bounds(&[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        let rep = localize_fixed_points(&g, &r, 1e-8, 100_000).unwrap();
        let proven: Vec<_> = rep.proven().collect();
        assert_eq!(rep.enclosures.len(), 1);
        assert_eq!(proven.len(), 1);
        assert!(proven[0].region.contains_point(&[0.5, 0.5]).unwrap());
        for e in &rep.enclosures {
            assert!(e.region.width() <= 1e-8);
        }
    }

    #[test]
    fn translation_has_no_enclosures() {
        let g = parse_map("dim 1\nmap g1 = x1 + 1").unwrap();
        let r = RectDomain::from_bounds(&[(0.0, 1.0)]).unwrap();
        let rep = localize_fixed_points(&g, &r, 1e-8, 1000).unwrap();
        assert!(rep.enclosures.is_empty());
        assert_eq!(rep.coverage.discarded_volume, 1.0);
    }

    #[test]
    fn tiny_budget_is_flagged() {
        let g = parse_map("dim 1\nmap g1 = cos(x1)").unwrap();
        let r = RectDomain::from_bounds(&[(0.0, 1.0)]).unwrap();
        let rep = localize_fixed_points(&g, &r, 1e-8, 1).unwrap();
        assert!(rep.budget_exhausted);
        assert_eq!(rep.enclosures.len(), 2);
        assert!(rep.enclosures.iter().all(|e| e.status == EnclosureStatus::Candidate));
    }

    #[test]
    fn bad_arguments_are_rejected() {
        let g = parse_map("dim 1\nmap g1 = x1").unwrap();
        let r = RectDomain::from_bounds(&[(0.0, 1.0)]).unwrap();
        assert!(localize_fixed_points(&g, &r, 0.0, 10).is_err());
        assert!(localize_fixed_points(&g, &r, 1e-3, 0).is_err());
        let r2 = RectDomain::from_bounds(&[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        assert!(matches!(
            localize_fixed_points(&g, &r2, 1e-3, 10),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn parameter_interval_prunes_for_all_t() {
        let g = parse_map("dim 1\nparam t\nmap g1 = (x1 + t)/2").unwrap();
        let r = RectDomain::from_bounds(&[(-1.0, 2.0)]).unwrap();
        let t = Interval::new(0.25, 0.3125).unwrap();
        let rep = localize_core(&g, &r, 1e-3, 100_000, Some(t)).unwrap();
        assert!(!rep.enclosures.is_empty());
        let lo = rep.enclosures.first().unwrap().region.coord(0).lo();
        let hi = rep.enclosures.last().unwrap().region.coord(0).hi();
        assert!(lo <= 0.25 && hi >= 0.3125);
        assert!(lo > 0.2 && hi < 0.36);
    }

    #[test]
    fn shell_bands_concentrate_at_level_one() {
        let g = parse_map("dim 2\nmap g1 = (x1 + x2)*x1\nmap g2 = (x1 + x2)*x2").unwrap();
        let spec = ConeShellSpec::sum(2, 0.5, 2.0).unwrap();
        let rep = localize_in_shell(&g, &spec, 1e-7, 2_000_000).unwrap();
        assert!(!rep.budget_exhausted);
        assert!(!rep.enclosures.is_empty());
        for e in &rep.enclosures {
            assert!(e.level.lo() >= 1.0 - 1e-6 && e.level.hi() <= 1.0 + 1e-6, "{:?}", e.level);
        }
        assert!(rep.enclosures.iter().any(|e| e.level.contains(1.0)));
        assert!(rep.enclosures.iter().any(|e| e.status == EnclosureStatus::Proven));
    }

    #[test]
    fn shell_without_fixed_points_is_cleared() {
        let g = parse_map("dim 2\nmap g1 = 3*x1\nmap g2 = 3*x2").unwrap();
        let spec = ConeShellSpec::sum(2, 1.0, 2.0).unwrap();
        let rep = localize_in_shell(&g, &spec, 1e-6, 100_000).unwrap();
        assert!(rep.enclosures.is_empty());
        assert!((rep.excluded_length - 1.0).abs() < 1e-12);
    }

    #[test]
    fn euclid_shell_uses_boxes() {
        let g = parse_map("dim 2\nmap g1 = 0.6 + 0*x1\nmap g2 = 0.8 + 0*x2").unwrap();
        let spec = ConeShellSpec::new(2, Functional::Euclid, 0.5, 2.0).unwrap();
        let rep = localize_in_shell(&g, &spec, 1e-3, 200_000).unwrap();
        assert!(!rep.enclosures.is_empty());
        for e in &rep.enclosures {
            assert!(e.level.lo() <= 1.0 + 1e-3 && e.level.hi() >= 1.0 - 1e-3);
        }
    }

    fn close(a: (f64, f64), b: (f64, f64)) -> bool {
        (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12
    }

    #[test]
    fn crossing_examples() {
        let line = |f: fn(f64) -> f64| {
            let s = [0.0, 1.0];
            crossing_from_values(&s, &[f(0.0), f(1.0)], 0.0, 1.0).unwrap()
        };
        assert!(close(line(|s| 3.0 * s - 1.0), (1.0 / 3.0, 2.0 / 3.0)));
        assert!(close(line(|s| s), (0.0, 1.0)));
        let s = [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0];
        let got = crossing_from_values(&s, &[-1.0, 2.0, -1.0, 2.0], 0.0, 1.0).unwrap();
        assert!(close(got, (7.0 / 9.0, 8.0 / 9.0)), "{got:?}");
    }

    #[test]
    fn descending_and_missing_crossings() {
        let got = crossing_from_values(&[0.0, 1.0], &[2.0, -1.0], 0.0, 1.0).unwrap();
        assert!(close(got, (1.0 / 3.0, 2.0 / 3.0)));
        assert!(matches!(
            crossing_from_values(&[0.0, 1.0], &[0.5, 0.7], 0.0, 1.0),
            Err(Error::NoCrossing(_))
        ));
    }

    #[test]
    fn path_composition() {
        let p = PathSamples::segment(vec![0.0, 0.0], vec![1.0, 2.0]).unwrap();
        let g = parse_map("dim 2\nmap g1 = x1 + x2\nmap g2 = x2").unwrap();
        let (s0, s1) = extract_crossing_subpath(
            &p,
            |x| Ok(g.eval_real(x, None).map_err(|e| Error::eval("path", e))?[0]),
            1.0,
            2.0,
        )
        .unwrap();
        assert!(close((s0, s1), (1.0 / 3.0, 2.0 / 3.0)));
        assert_eq!(p.point_at(0.5), vec![0.5, 1.0]);
        assert!(PathSamples::new(vec![(0.0, vec![0.0]), (0.0, vec![1.0]), (1.0, vec![1.0])]).is_err());
    }
}

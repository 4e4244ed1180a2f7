use super::cover::{confirm_witness, eval_failure, judge, run_cover, CoverStatus, Cover, Verdict};
use super::{combine, Certificate, CertificateKind, Form, Outcome, Relation, Stats, Timer};
use crate::error::{Error, Result};
use crate::geometry::{ConeShellSpec, DomainSpec, Functional};
use crate::interval::{Interval, IntervalBox};
use crate::mapdsl::MapSpec;

/// Checks the cone shell conditions for `T` on `{x >= 0 : a <= l(x) <= b}`.
/// Expansive: `l(T x) <= a` on the `a`-slice and `l(T x) >= b` on the
/// `b`-slice; compressive: the reverse. `T(x) >= 0` is verified over the
/// whole shell.
///
/// Slices are covered by boxes whose `l`-range contains the level, so every
/// verified bound holds on a superset of the slice.
pub fn certify_cone_shell(
    t_map: &MapSpec,
    spec: &ConeShellSpec,
    form: Form,
    max_depth: usize,
) -> Result<Certificate> {
    let timer = Timer::start();
    if t_map.has_param() {
        return Err(Error::InvalidArgument("map depends on t; fix the parameter first".into()));
    }
    if t_map.dim() != spec.dim {
        return Err(Error::DimensionMismatch { expected: spec.dim, found: t_map.dim() });
    }
    let l = &spec.functional;
    let (a, b) = (spec.a, spec.b);
    let mut stats = Stats::default();
    let mut evidence = Vec::new();
    let mut witness = Vec::new();
    let mut parts = Vec::new();
    let mut collect = |c: Cover, stats: &mut Stats| {
        stats.absorb(c.boxes, c.depth);
        parts.push(match c.status {
            CoverStatus::Verified => {
                evidence.extend(c.evidence);
                Outcome::Certified
            }
            CoverStatus::Refuted(w) => {
                witness.push(w);
                Outcome::Refuted
            }
            CoverStatus::Undecided => Outcome::Indeterminate,
        });
    };

    let zero = Interval::point(0.0);
    let invariance = run_cover(spec.sublevel_box(b), max_depth, |bx| {
        let Ok(lr) = l.eval_interval(bx.coords()) else { return Verdict::Undecided };
        if lr.hi() < a || lr.lo() > b {
            return Verdict::Irrelevant;
        }
        let image = match t_map.eval_interval_strict(bx, None) {
            Ok(v) => v,
            Err(e) => return eval_failure(e, || format!("shell, box {bx}"), false),
        };
        let mut ev = Vec::new();
        for j in 0..spec.dim {
            let face = format!("cone x{}", j + 1);
            let verdict = judge(&face, bx, image.coord(j), Relation::Ge, zero, || {
                let target = 0.5 * (lr.lo().max(a) + lr.hi().min(b));
                let (p, tiny) = scaled_box(&bx.midpoint(), target, l)?;
                let lo = l.eval_interval(&corner(&tiny, false)).ok()?;
                let hi = l.eval_interval(&corner(&tiny, true)).ok()?;
                if lo.lo() < a || hi.hi() > b {
                    return None;
                }
                confirm_witness(&face, p, tiny, Relation::Ge, zero, |pb| {
                    t_map.eval_component_interval(j, pb, None, true).ok()
                })
            });
            match verdict {
                Verdict::Holds(e) => ev.extend(e),
                other => return other,
            }
        }
        Verdict::Holds(ev)
    })?;
    collect(invariance, &mut stats);

    let (rel_a, rel_b) = match form {
        Form::Expansive => (Relation::Le, Relation::Ge),
        Form::Compressive => (Relation::Ge, Relation::Le),
    };
    for (face, level, relation) in [("slice a", a, rel_a), ("slice b", b, rel_b)] {
        let threshold = Interval::point(level);
        let cover = run_cover(spec.sublevel_box(level), max_depth, |bx| {
            let Ok(lr) = l.eval_interval(bx.coords()) else { return Verdict::Undecided };
            if !lr.contains(level) {
                return Verdict::Irrelevant;
            }
            let bound = match t_map
                .eval_interval_strict(bx, None)
                .map_err(|e| eval_failure(e, || format!("{face}, box {bx}"), false))
                .and_then(|img| l.eval_interval(img.coords()).map_err(|_| Verdict::Undecided))
            {
                Ok(v) => v,
                Err(v) => return v,
            };
            judge(face, bx, bound, relation, threshold, || {
                let (p, tiny) = scaled_box(&bx.midpoint(), level, l)?;
                let lo = l.eval_interval(&corner(&tiny, false)).ok()?;
                let hi = l.eval_interval(&corner(&tiny, true)).ok()?;
                // l is monotone on the orthant, so the tiny box meets the
                // slice once its corners straddle the level.
                if lo.hi() > level || hi.lo() < level {
                    return None;
                }
                confirm_witness(face, p, tiny, relation, threshold, |pb| {
                    let img = t_map.eval_interval_strict(pb, None).ok()?;
                    l.eval_interval(img.coords()).ok()
                })
            })
        })?;
        collect(cover, &mut stats);
    }

    let outcome = combine(&parts);
    if outcome != Outcome::Refuted {
        witness.clear();
    }
    stats.seconds = timer.seconds();
    Ok(Certificate {
        kind: match form {
            Form::Expansive => CertificateKind::ConeExpansive,
            Form::Compressive => CertificateKind::ConeCompressive,
        },
        outcome,
        directions: None,
        domain: DomainSpec::ConeShell(spec.clone()),
        evidence,
        witness,
        stats,
        index: None,
        index_check: None,
    })
}

/// The point `m * level / l(m)` together with a box of relative radius
/// `2^-40` around it.
pub(crate) fn scaled_box(m: &[f64], level: f64, l: &Functional) -> Option<(Vec<f64>, IntervalBox)> {
    let lm = l.eval(m);
    if !(lm > 0.0) || !lm.is_finite() {
        return None;
    }
    let s = level / lm;
    let p: Vec<f64> = m.iter().map(|v| (v * s).max(0.0)).collect();
    let eps = 2f64.powi(-40);
    let coords = p
        .iter()
        .map(|&v| Interval::new(v * (1.0 - eps), v * (1.0 + eps)))
        .collect::<std::result::Result<Vec<_>, _>>()
        .ok()?;
    Some((p, IntervalBox::new(coords).ok()?))
}

pub(crate) fn corner(b: &IntervalBox, upper: bool) -> Vec<Interval> {
    b.coords()
        .iter()
        .map(|c| Interval::point(if upper { c.hi() } else { c.lo() }))
        .collect()
}

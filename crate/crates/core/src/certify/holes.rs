use super::cover::{confirm_witness, eval_failure, judge, run_cover, Cover, CoverStatus, Verdict};
use super::{combine, Certificate, CertificateKind, Outcome, Relation, Stats, Timer};
use crate::degree::holed_ball_index;
use crate::error::{Error, Result};
use crate::geometry::{circle_arc_box, DomainSpec, HoledBallSpec};
use crate::interval::{Interval, IntervalBox};
use crate::mapdsl::MapSpec;

fn dist2(b: &IntervalBox, c: [f64; 2]) -> Option<Interval> {
    let dx = b.coord(0).sub(Interval::point(c[0])).ok()?;
    let dy = b.coord(1).sub(Interval::point(c[1])).ok()?;
    dx.sqr().ok()?.add(dy.sqr().ok()?).ok()
}

/// Checks `T(L)` in `B[0, R]` and `T(boundary of each hole)` in the closed
/// hole, for `L` the disc `B[0, R]` with the open holes removed. Certified
/// maps have index `1 - (number of holes)` on the interior of `L`, which is
/// nonzero because a single hole is rejected when the domain is built.
pub fn certify_holes(t_map: &MapSpec, spec: &HoledBallSpec, max_depth: usize) -> Result<Certificate> {
    let timer = Timer::start();
    if t_map.has_param() {
        return Err(Error::InvalidArgument("map depends on t; fix the parameter first".into()));
    }
    if t_map.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: t_map.dim() });
    }
    if spec.holes.len() == 1 {
        return Err(Error::SingleHole);
    }
    let big_r = spec.outer_radius;
    let r2 = Interval::point(big_r).sqr()?;
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
    let hole_r2: Vec<Interval> = spec
        .holes
        .iter()
        .map(|h| Interval::point(h.radius).sqr())
        .collect::<std::result::Result<_, _>>()?;

    let in_l = |p: &[f64]| -> bool {
        let Ok(pb) = IntervalBox::from_point(p) else { return false };
        let Some(d0) = dist2(&pb, [0.0, 0.0]) else { return false };
        d0.hi() <= r2.lo()
            && spec
                .holes
                .iter()
                .zip(&hole_r2)
                .all(|(h, hr)| dist2(&pb, h.center).is_some_and(|d| d.lo() >= hr.hi()))
    };

    let root = IntervalBox::from_bounds(&[(-big_r, big_r), (-big_r, big_r)])?;
    let outer = run_cover(root, max_depth, |bx| {
        let Some(d0) = dist2(bx, [0.0, 0.0]) else { return Verdict::Undecided };
        if d0.lo() > r2.hi() {
            return Verdict::Irrelevant;
        }
        for (h, hr) in spec.holes.iter().zip(&hole_r2) {
            if dist2(bx, h.center).is_some_and(|d| d.hi() < hr.lo()) {
                return Verdict::Irrelevant;
            }
        }
        let image = match t_map.eval_interval_strict(bx, None) {
            Ok(v) => v,
            Err(e) => return eval_failure(e, || format!("L, box {bx}"), false),
        };
        let Some(bound) = dist2(&image, [0.0, 0.0]) else { return Verdict::Undecided };
        judge("outer", bx, bound, Relation::Le, r2, || {
            let p = bx.midpoint();
            if !in_l(&p) {
                return None;
            }
            let region = IntervalBox::from_point(&p).ok()?;
            confirm_witness("T(L) in B[0,R]", p, region, Relation::Le, r2, |pb| {
                let img = t_map.eval_interval_strict(pb, None).ok()?;
                dist2(&img, [0.0, 0.0])
            })
        })
    })?;
    collect(outer, &mut stats);

    for (k, (h, hr)) in spec.holes.iter().zip(&hole_r2).enumerate() {
        let face = format!("hole {}", k + 1);
        let root = IntervalBox::from_bounds(&[(0.0, 1.0)])?;
        let cover = run_cover(root, max_depth, |sb| {
            let Ok(arc) = circle_arc_box(h.center, h.radius, sb.coord(0)) else {
                return Verdict::Undecided;
            };
            let image = match t_map.eval_interval_strict(&arc, None) {
                Ok(v) => v,
                Err(e) => return eval_failure(e, || format!("{face}, arc {arc}"), false),
            };
            let Some(bound) = dist2(&image, h.center) else { return Verdict::Undecided };
            judge(&face, &arc, bound, Relation::Le, *hr, || {
                let s = Interval::point(sb.coord(0).midpoint());
                let tiny = circle_arc_box(h.center, h.radius, s).ok()?;
                confirm_witness(&face, tiny.midpoint(), tiny, Relation::Le, *hr, |pb| {
                    let img = t_map.eval_interval_strict(pb, None).ok()?;
                    dist2(&img, h.center)
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
        kind: CertificateKind::Holes,
        outcome,
        directions: None,
        domain: DomainSpec::HoledBall(spec.clone()),
        evidence,
        witness,
        stats,
        index: (outcome == Outcome::Certified).then(|| spec.index_formula()),
        index_check: None,
    })
}

/// [`certify_holes`] followed, for certified maps, by an independent
/// computation of the index from boundary winding numbers.
pub fn certify_holes_cross_checked(
    t_map: &MapSpec,
    spec: &HoledBallSpec,
    max_depth: usize,
) -> Result<Certificate> {
    let mut cert = certify_holes(t_map, spec, max_depth)?;
    if cert.is_certified() {
        let timer = Timer::start();
        cert.index_check = holed_ball_index(t_map, spec, max_depth).ok().map(|d| d.value);
        cert.stats.seconds += timer.seconds();
    }
    Ok(cert)
}

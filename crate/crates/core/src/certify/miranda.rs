use super::cover::{confirm_witness, eval_failure, judge, run_cover, CoverStatus, Verdict};
use super::{
    Certificate, CertificateKind, Direction, Directions, Evidence, Outcome, Relation, Stats, Timer,
    Witness,
};
use crate::error::{Error, Result};
use crate::geometry::{face, DomainSpec, RectDomain, Side};
use crate::interval::{Interval, IntervalBox};
use crate::mapdsl::MapSpec;

/// Checks the face conditions `(e_i)` or `(c_i)` for every coordinate of
/// `g` on the rectangle `r`. A `CERTIFIED` result proves that `g` has a
/// fixed point in `r`.
pub fn certify_miranda(
    g: &MapSpec,
    r: &RectDomain,
    directions: &Directions,
    max_depth: usize,
) -> Result<Certificate> {
    if g.has_param() {
        return Err(Error::InvalidArgument("map depends on t; fix the parameter first".into()));
    }
    miranda_core(g, r, directions, max_depth, None)
}

pub(crate) struct FaceCheck {
    pub status: CoverStatus,
    pub evidence: Vec<Evidence>,
    pub boxes: usize,
    pub depth: usize,
}

/// Verifies that the whole map is defined (and hence continuous) on `region`.
pub(crate) fn definedness(
    g: &MapSpec,
    region: &IntervalBox,
    t: Option<Interval>,
    max_depth: usize,
    what: &str,
) -> Result<FaceCheck> {
    let c = run_cover(region.clone(), max_depth, |b| match g.eval_interval_strict(b, t) {
        Ok(_) => Verdict::Holds(Vec::new()),
        Err(e) => eval_failure(e, || format!("{what}, box {b}"), true),
    })?;
    Ok(FaceCheck { status: c.status, evidence: Vec::new(), boxes: c.boxes, depth: c.depth })
}

fn face_relation(dir: Direction, side: Side) -> Relation {
    match (dir, side) {
        (Direction::E, Side::Minus) | (Direction::C, Side::Plus) => Relation::Le,
        (Direction::E, Side::Plus) | (Direction::C, Side::Minus) => Relation::Ge,
    }
}

fn check_face(
    g: &MapSpec,
    r: &RectDomain,
    axis: usize,
    side: Side,
    dir: Direction,
    t: Option<Interval>,
    max_depth: usize,
) -> Result<FaceCheck> {
    let f = face(r, axis, side)?;
    let id = f.id();
    let relation = face_relation(dir, side);
    let threshold = Interval::point(f.level());
    let condition = format!("({}{}) on {}", if dir == Direction::E { "e" } else { "c" }, axis + 1, id);
    let c = run_cover(f.as_box.clone(), max_depth, |b| {
        match g.eval_component_interval(axis, b, t, true) {
            Ok(bound) => judge(&id, b, bound, relation, threshold, || {
                let p = b.midpoint();
                let region = IntervalBox::from_point(&p).ok()?;
                confirm_witness(&condition, p, region, relation, threshold, |pb| {
                    g.eval_component_interval(axis, pb, t, true).ok()
                })
            }),
            Err(e) => eval_failure(e, || format!("face {id}, box {b}"), true),
        }
    })?;
    Ok(FaceCheck { status: c.status, evidence: c.evidence, boxes: c.boxes, depth: c.depth })
}

enum Attempt {
    Verified(Vec<Evidence>),
    Refuted(Witness),
    Undecided,
}

fn attempt(
    g: &MapSpec,
    r: &RectDomain,
    axis: usize,
    dir: Direction,
    t: Option<Interval>,
    max_depth: usize,
    stats: &mut Stats,
) -> Result<Attempt> {
    let mut evidence = Vec::new();
    let mut undecided = false;
    for side in [Side::Minus, Side::Plus] {
        let fc = check_face(g, r, axis, side, dir, t, max_depth)?;
        stats.absorb(fc.boxes, fc.depth);
        match fc.status {
            CoverStatus::Verified => evidence.extend(fc.evidence),
            CoverStatus::Refuted(w) => return Ok(Attempt::Refuted(w)),
            CoverStatus::Undecided => undecided = true,
        }
    }
    Ok(if undecided { Attempt::Undecided } else { Attempt::Verified(evidence) })
}

/// Miranda check with an optional interval-valued parameter: with `t` set,
/// a `CERTIFIED` result holds simultaneously for every parameter in `t`.
pub(crate) fn miranda_core(
    g: &MapSpec,
    r: &RectDomain,
    directions: &Directions,
    max_depth: usize,
    t: Option<Interval>,
) -> Result<Certificate> {
    let timer = Timer::start();
    let n = r.dim();
    if g.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g.dim() });
    }
    if let Directions::Fixed(d) = directions {
        if d.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: d.len() });
        }
    }
    let mut stats = Stats::default();
    let defined = definedness(g, r.as_box(), t, max_depth, "rectangle")?;
    stats.absorb(defined.boxes, defined.depth);

    let mut chosen = Vec::with_capacity(n);
    let mut evidence = Vec::new();
    let mut witness = Vec::new();
    let mut refuted = false;
    let mut undecided = !matches!(defined.status, CoverStatus::Verified);
    for axis in 0..n {
        let tries: Vec<Direction> = match directions {
            Directions::Auto => vec![Direction::C, Direction::E],
            Directions::Fixed(d) => vec![d[axis]],
        };
        let mut found = None;
        let mut refutations = Vec::new();
        for &dir in &tries {
            match attempt(g, r, axis, dir, t, max_depth, &mut stats)? {
                Attempt::Verified(ev) => {
                    evidence.extend(ev);
                    found = Some(dir);
                    break;
                }
                Attempt::Refuted(w) => refutations.push(w),
                Attempt::Undecided => {}
            }
        }
        if found.is_none() {
            if refutations.len() == tries.len() {
                refuted = true;
                witness.extend(refutations);
            } else {
                undecided = true;
            }
        }
        chosen.push(found);
    }

    let outcome = if refuted {
        Outcome::Refuted
    } else if undecided {
        Outcome::Indeterminate
    } else {
        Outcome::Certified
    };
    stats.seconds = timer.seconds();
    Ok(Certificate {
        kind: CertificateKind::Miranda,
        outcome,
        directions: Some(chosen),
        domain: DomainSpec::Rect(r.clone()),
        evidence,
        witness,
        stats,
        index: None,
        index_check: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::flip_coordinates;
    use crate::mapdsl::parse_map;

    fn rect(bounds: &[(f64, f64)]) -> RectDomain {
        RectDomain::from_bounds(bounds).unwrap()
    }

    #[test]
    fn constant_map_is_compressive() {
        let g = parse_map("dim 1\nmap g1 = 0.5").unwrap();
        let c = certify_miranda(&g, &rect(&[(0.0, 1.0)]), &Directions::Auto, 24).unwrap();
        assert_eq!(c.outcome, Outcome::Certified);
        assert_eq!(c.directions, Some(vec![Some(Direction::C)]));
        assert_eq!(c.evidence.len(), 2);
        assert!(c.witness.is_empty());
    }

    #[test]
    fn linear_map_mixes_directions() {
        let g = parse_map("dim 2\nmap g1 = 2*x1 - 0.5\nmap g2 = 0.25 + 0.5*x2").unwrap();
        let r = rect(&[(0.0, 1.0), (0.0, 1.0)]);
        let c = certify_miranda(&g, &r, &Directions::Auto, 24).unwrap();
        assert_eq!(c.outcome, Outcome::Certified);
        assert_eq!(c.directions, Some(vec![Some(Direction::E), Some(Direction::C)]));
        let fixed = Directions::Fixed(vec![Direction::E, Direction::C]);
        assert!(certify_miranda(&g, &r, &fixed, 24).unwrap().is_certified());
        let wrong = Directions::Fixed(vec![Direction::C, Direction::C]);
        assert_eq!(certify_miranda(&g, &r, &wrong, 24).unwrap().outcome, Outcome::Refuted);
    }

    #[test]
    fn translation_is_refuted_on_both_faces() {
        let g = parse_map("dim 1\nmap g1 = x1 + 1").unwrap();
        let c = certify_miranda(&g, &rect(&[(0.0, 1.0)]), &Directions::Auto, 24).unwrap();
        assert_eq!(c.outcome, Outcome::Refuted);
        assert_eq!(c.witness.len(), 2);
        assert_eq!(c.witness[0].point, vec![1.0]);
        assert!(c.witness[0].condition.starts_with("(c1)"));
        assert_eq!(c.witness[1].point, vec![0.0]);
        assert!(c.witness[1].condition.starts_with("(e1)"));
    }

    #[test]
    fn flipped_map_swaps_directions() {
        let g = parse_map("dim 2\nmap g1 = 2*x1 - 0.5\nmap g2 = 0.25 + 0.5*x2").unwrap();
        let r = rect(&[(0.0, 1.0), (0.0, 1.0)]);
        let h = flip_coordinates(&g, &[0, 1]).unwrap();
        let c = certify_miranda(&h, &r, &Directions::Fixed(vec![Direction::C, Direction::E]), 24)
            .unwrap();
        assert!(c.is_certified());
    }

    #[test]
    fn undefined_map_is_an_error() {
        let g = parse_map("dim 1\nmap g1 = sqrt(x1 - 5)").unwrap();
        let e = certify_miranda(&g, &rect(&[(0.0, 1.0)]), &Directions::Auto, 8).unwrap_err();
        assert!(matches!(e, Error::Evaluation { .. }));
    }

    #[test]
    fn partially_defined_map_is_indeterminate() {
        // 1/x1 is undefined at 0, a corner of the rectangle.
        let g = parse_map("dim 1\nmap g1 = 0.5 + 0*x1 + 0.01/(x1 + 0)").unwrap();
        let c = certify_miranda(&g, &rect(&[(0.0, 1.0)]), &Directions::Auto, 6).unwrap();
        assert_ne!(c.outcome, Outcome::Certified);
    }

    #[test]
    fn dimension_mismatch() {
        let g = parse_map("dim 1\nmap g1 = x1").unwrap();
        let r = rect(&[(0.0, 1.0), (0.0, 1.0)]);
        assert!(matches!(
            certify_miranda(&g, &r, &Directions::Auto, 4),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}

use super::cover::{confirm_witness, eval_failure, judge, run_cover, CoverStatus, Verdict};
use super::{combine, Certificate, CertificateKind, Evidence, Form, Outcome, Relation, Stats, Timer};
use crate::error::{Error, Result};
use crate::geometry::{compressive_to_expansive, CylinderSpec, DomainSpec};
use crate::interval::{Interval, IntervalBox};
use crate::mapdsl::MapSpec;

/// Checks the cylinder conditions for `T` on `[a, b] x A`, where the first
/// coordinate is the height. Expansive: `T_1 <= a` on `{a} x A` and
/// `T_1 >= b` on `{b} x A`; compressive: the reverse. In both forms the
/// containment `T(C)` in `R x A` is verified over a cover of the cylinder.
///
/// The compressive form is computed as the expansive form of
/// `(2t - T_1, T_2)`.
pub fn certify_cylinder(
    t_map: &MapSpec,
    c: &CylinderSpec,
    form: Form,
    max_depth: usize,
) -> Result<Certificate> {
    match form {
        Form::Expansive => expansive(t_map, c, max_depth),
        Form::Compressive => {
            let mut cert = expansive(&compressive_to_expansive(t_map)?, c, max_depth)?;
            cert.kind = CertificateKind::CylinderCompressive;
            Ok(cert)
        }
    }
}

fn expansive(t_map: &MapSpec, c: &CylinderSpec, max_depth: usize) -> Result<Certificate> {
    let timer = Timer::start();
    if t_map.has_param() {
        return Err(Error::InvalidArgument("map depends on t; fix the parameter first".into()));
    }
    if t_map.dim() != c.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), found: t_map.dim() });
    }
    let mut stats = Stats::default();
    let mut evidence = Vec::new();
    let mut witness = Vec::new();
    let mut parts = Vec::new();

    let containment = run_cover(c.as_box(), max_depth, |b| {
        let image = match t_map.eval_interval_strict(b, None) {
            Ok(v) => v,
            Err(e) => return eval_failure(e, || format!("cylinder, box {b}"), true),
        };
        let mut ev = Vec::new();
        for j in 1..c.dim() {
            let face = format!("containment x{}", j + 1);
            let target = c.base.coord(j - 1);
            match judge(&face, b, image.coord(j), Relation::Within, target, || {
                let p = b.midpoint();
                let region = IntervalBox::from_point(&p).ok()?;
                confirm_witness(&face, p, region, Relation::Within, target, |pb| {
                    t_map.eval_component_interval(j, pb, None, true).ok()
                })
            }) {
                Verdict::Holds(e) => ev.extend(e),
                other => return other,
            }
        }
        Verdict::Holds(ev)
    })?;
    stats.absorb(containment.boxes, containment.depth);
    parts.push(match containment.status {
        CoverStatus::Verified => {
            evidence.extend(containment.evidence);
            Outcome::Certified
        }
        CoverStatus::Refuted(w) => {
            witness.push(w);
            Outcome::Refuted
        }
        CoverStatus::Undecided => Outcome::Indeterminate,
    });

    let bases: [(&str, IntervalBox, Relation, f64); 2] = [
        ("t=a", c.left_base(), Relation::Le, c.t_range.lo()),
        ("t=b", c.right_base(), Relation::Ge, c.t_range.hi()),
    ];
    for (face, region, relation, level) in bases {
        let threshold = Interval::point(level);
        let cond = match relation {
            Relation::Ge => format!("T1 >= b on {face}"),
            _ => format!("T1 <= a on {face}"),
        };
        let cover = run_cover(region, max_depth, |b| {
            match t_map.eval_component_interval(0, b, None, true) {
                Ok(bound) => judge(face, b, bound, relation, threshold, || {
                    let p = b.midpoint();
                    let region = IntervalBox::from_point(&p).ok()?;
                    confirm_witness(&cond, p, region, relation, threshold, |pb| {
                        t_map.eval_component_interval(0, pb, None, true).ok()
                    })
                }),
                Err(e) => eval_failure(e, || format!("base {face}, box {b}"), true),
            }
        })?;
        stats.absorb(cover.boxes, cover.depth);
        parts.push(match cover.status {
            CoverStatus::Verified => {
                evidence.extend::<Vec<Evidence>>(cover.evidence);
                Outcome::Certified
            }
            CoverStatus::Refuted(w) => {
                witness.push(w);
                Outcome::Refuted
            }
            CoverStatus::Undecided => Outcome::Indeterminate,
        });
    }

    let outcome = combine(&parts);
    if outcome != Outcome::Refuted {
        witness.clear();
    }
    stats.seconds = timer.seconds();
    Ok(Certificate {
        kind: CertificateKind::CylinderExpansive,
        outcome,
        directions: None,
        domain: DomainSpec::Cylinder(c.clone()),
        evidence,
        witness,
        stats,
        index: None,
        index_check: None,
    })
}

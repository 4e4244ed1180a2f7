//! Breadth-first adaptive bisection shared by every certificate.

use rayon::prelude::*;

use super::{Evidence, Relation, Witness, MAX_BOXES_PER_COVER};
use crate::error::Error;
use crate::interval::{Interval, IntervalBox};
use crate::mapdsl::EvalError;

/// Result of checking one box of a cover.
pub(crate) enum Verdict {
    Holds(Vec<Evidence>),
    Refuted(Witness),
    /// The box does not meet the set being covered.
    Irrelevant,
    Undecided,
    Failed(Error),
}

#[derive(Debug)]
pub(crate) enum CoverStatus {
    Verified,
    Refuted(Witness),
    Undecided,
}

#[derive(Debug)]
pub(crate) struct Cover {
    pub status: CoverStatus,
    pub evidence: Vec<Evidence>,
    pub boxes: usize,
    pub depth: usize,
}

const PARALLEL_THRESHOLD: usize = 64;

/// Covers `root` by bisecting undecided boxes along their widest axis, up to
/// `max_depth` levels. Levels are processed in order and verdicts are merged
/// in box order, so the result does not depend on the worker count. The
/// first refutation in that order ends the cover.
pub(crate) fn run_cover<F>(root: IntervalBox, max_depth: usize, check: F) -> Result<Cover, Error>
where
    F: Fn(&IntervalBox) -> Verdict + Sync,
{
    let mut level = vec![root];
    let mut depth = 0;
    let mut boxes = 0;
    let mut evidence = Vec::new();
    let mut undecided = false;
    loop {
        boxes += level.len();
        let verdicts: Vec<Verdict> = if level.len() >= PARALLEL_THRESHOLD {
            level.par_iter().map(&check).collect()
        } else {
            level.iter().map(&check).collect()
        };
        let mut next = Vec::new();
        for (b, v) in level.iter().zip(verdicts) {
            match v {
                Verdict::Holds(ev) => evidence.extend(ev),
                Verdict::Irrelevant => {}
                Verdict::Refuted(w) => {
                    return Ok(Cover { status: CoverStatus::Refuted(w), evidence, boxes, depth })
                }
                Verdict::Failed(e) => return Err(e),
                Verdict::Undecided => {
                    if depth >= max_depth || boxes + next.len() + 2 > MAX_BOXES_PER_COVER {
                        undecided = true;
                        continue;
                    }
                    match b.bisect_widest() {
                        Ok((l, r)) => {
                            next.push(l);
                            next.push(r);
                        }
                        Err(_) => undecided = true,
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
        depth += 1;
    }
    let status = if undecided { CoverStatus::Undecided } else { CoverStatus::Verified };
    Ok(Cover { status, evidence, boxes, depth })
}

/// Maps an evaluation failure on a box to a verdict. Failures that only say
/// "possibly undefined somewhere" call for subdivision; with `fatal` set, a
/// failure proving the map undefined on the whole box aborts the cover.
pub(crate) fn eval_failure(e: EvalError, location: impl FnOnce() -> String, fatal: bool) -> Verdict {
    match e {
        EvalError::PartialDomain(_) | EvalError::NonFinite(_) | EvalError::Interval(_) => {
            Verdict::Undecided
        }
        EvalError::Domain(_) | EvalError::DivisionByZero if !fatal => Verdict::Undecided,
        other => Verdict::Failed(Error::eval(location(), other)),
    }
}

/// Standard classification of a scalar bound against a threshold. `witness`
/// is consulted only when the whole bound violates the relation and must
/// return a confirmed witness, or `None` to leave the box undecided.
pub(crate) fn judge(
    face: &str,
    region: &IntervalBox,
    bound: Interval,
    relation: Relation,
    threshold: Interval,
    witness: impl FnOnce() -> Option<Witness>,
) -> Verdict {
    if relation.holds(bound, threshold) {
        Verdict::Holds(vec![Evidence {
            face: face.to_string(),
            region: region.clone(),
            bound,
            relation,
            threshold,
        }])
    } else if relation.violated(bound, threshold) {
        match witness() {
            Some(w) => Verdict::Refuted(w),
            None => Verdict::Undecided,
        }
    } else {
        Verdict::Undecided
    }
}

/// Re-evaluates a scalar quantity on `region` and accepts it as a witness if
/// the whole range violates the relation.
pub(crate) fn confirm_witness(
    condition: &str,
    point: Vec<f64>,
    region: IntervalBox,
    relation: Relation,
    threshold: Interval,
    quantity: impl FnOnce(&IntervalBox) -> Option<Interval>,
) -> Option<Witness> {
    let value = quantity(&region)?;
    relation.violated(value, threshold).then(|| Witness {
        condition: condition.to_string(),
        point,
        region,
        value,
        relation,
        threshold,
    })
}

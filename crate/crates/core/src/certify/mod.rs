//! Three-valued certificates for the boundary hypotheses of the fixed point
//! theorems on rectangles, cylinders, cone shells and holed discs.
//!
//! Every check is an interval computation over an adaptive box cover. A
//! condition is accepted only when interval bounds prove it on every box of
//! the cover; it is refuted only when some point provably violates it.

mod cone;
pub(crate) mod cover;
mod cylinder;
mod holes;
pub(crate) mod miranda;

use std::time::Instant;

use serde::Serialize;

use crate::geometry::DomainSpec;
use crate::interval::{Interval, IntervalBox};

pub use cone::certify_cone_shell;
pub use cylinder::certify_cylinder;
pub use holes::{certify_holes, certify_holes_cross_checked};
pub use miranda::certify_miranda;
pub(crate) use miranda::miranda_core;

/// Default subdivision depth for every cover.
pub const DEFAULT_MAX_DEPTH: usize = 24;

/// Upper bound on the number of boxes examined by a single cover. A cover
/// that hits it stops refining and reports the affected condition as
/// undecided.
pub const MAX_BOXES_PER_COVER: usize = 1 << 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Miranda,
    CylinderExpansive,
    CylinderCompressive,
    ConeExpansive,
    ConeCompressive,
    Holes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Certified,
    Refuted,
    Indeterminate,
}

/// Per-coordinate choice between the expansive `(e_i)` and compressive
/// `(c_i)` face conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    E,
    C,
}

impl Direction {
    pub fn swapped(self) -> Direction {
        match self {
            Direction::E => Direction::C,
            Direction::C => Direction::E,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Directions {
    /// Try `(c_i)` first, then `(e_i)`, independently per coordinate.
    Auto,
    Fixed(Vec<Direction>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Expansive,
    Compressive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `bound <= threshold`
    Le,
    /// `bound >= threshold`
    Ge,
    /// `bound` contained in `threshold`
    Within,
}

impl Relation {
    /// True when every value in `bound` satisfies the relation against every
    /// value in `threshold`.
    pub fn holds(self, bound: Interval, threshold: Interval) -> bool {
        match self {
            Relation::Le => bound.hi() <= threshold.lo(),
            Relation::Ge => bound.lo() >= threshold.hi(),
            Relation::Within => bound.is_subset_of(&threshold),
        }
    }

    /// True when no value in `bound` satisfies the relation.
    pub fn violated(self, bound: Interval, threshold: Interval) -> bool {
        match self {
            Relation::Le => bound.lo() > threshold.hi(),
            Relation::Ge => bound.hi() < threshold.lo(),
            Relation::Within => !bound.intersects(&threshold),
        }
    }
}

/// One verified inequality: over `region`, the checked quantity lies in
/// `bound`, and `bound relation threshold` holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub face: String,
    #[serde(rename = "box")]
    pub region: IntervalBox,
    pub bound: Interval,
    pub relation: Relation,
    pub threshold: Interval,
}

/// A point where a required condition fails. `region` contains `point`
/// and a point of the constrained set; the checked quantity over the whole
/// region lies in `value`, which violates `relation threshold` outright.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub condition: String,
    pub point: Vec<f64>,
    #[serde(rename = "box")]
    pub region: IntervalBox,
    pub value: Interval,
    pub relation: Relation,
    pub threshold: Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub struct Stats {
    pub boxes: usize,
    pub depth: usize,
    pub seconds: f64,
}

impl Stats {
    pub(crate) fn absorb(&mut self, boxes: usize, depth: usize) {
        self.boxes += boxes;
        self.depth = self.depth.max(depth);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub outcome: Outcome,
    /// Miranda only: the verified direction per coordinate, `null` where no
    /// direction could be verified.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<Option<Direction>>>,
    pub domain: DomainSpec,
    pub evidence: Vec<Evidence>,
    /// Empty unless the outcome is `REFUTED`.
    pub witness: Vec<Witness>,
    pub stats: Stats,
    /// Holed disc only: the index `1 - holes` on the interior, when certified.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<i64>,
    /// Holed disc only: the same index recomputed from boundary windings.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index_check: Option<i64>,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.outcome == Outcome::Certified
    }

    /// Clears the timing field so that repeated runs serialize identically.
    pub fn stabilize(&mut self) {
        self.stats.seconds = 0.0;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

pub(crate) struct Timer(Instant);

impl Timer {
    pub(crate) fn start() -> Self {
        Timer(Instant::now())
    }

    pub(crate) fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

/// Combines sub-results: any refutation wins, then any undecided part.
pub(crate) fn combine(parts: &[Outcome]) -> Outcome {
    if parts.contains(&Outcome::Refuted) {
        Outcome::Refuted
    } else if parts.iter().all(|&o| o == Outcome::Certified) {
        Outcome::Certified
    } else {
        Outcome::Indeterminate
    }
}

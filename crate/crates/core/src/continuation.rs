//! Chains of fixed-point enclosures across the parameter range of a family
//! `psi(t, .)`.
//!
//! The chain is evidence for a continuum of fixed points joining the two
//! ends of the parameter range, not a proof of connectedness: every slab is
//! a rigorous enclosure of the fixed points for all parameters in its cell,
//! but two overlapping slabs need not share a fixed point.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::degree::fixed_point_index;
use crate::error::{Error, Result};
use crate::geometry::RectDomain;
use crate::interval::{Interval, IntervalBox};
use crate::localize::{localize_core, Enclosure};
use crate::mapdsl::MapSpec;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainLink {
    pub cell: usize,
    pub t: Interval,
    #[serde(rename = "box")]
    pub region: IntervalBox,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuumWitness {
    pub complete: bool,
    pub cells: usize,
    pub t_grid: Vec<f64>,
    pub chain: Vec<ChainLink>,
    /// Upper end of the furthest cell reachable from `t = a`, or `a` when
    /// the first slab is empty.
    pub max_t_reached: f64,
    /// Cells whose slab has no enclosure at all.
    pub empty_cells: Vec<usize>,
    pub budget_exhausted: bool,
    /// Fixed point index of `psi(a, .)` on the box, when it was requested
    /// and could be verified.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start_index: Option<i64>,
    /// Enclosures per cell, valid for every parameter in the cell.
    #[serde(skip)]
    pub slabs: Vec<Vec<Enclosure>>,
}

impl ContinuumWitness {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("witness serializes")
    }
}

/// `m + 1` equally spaced values from `a` to `b`, with both ends exact.
fn grid_points(t_range: Interval, m: usize) -> Vec<f64> {
    let (a, b) = (t_range.lo(), t_range.hi());
    (0..=m)
        .map(|j| if j == m { b } else { a + (b - a) * (j as f64) / (m as f64) })
        .collect()
}

/// Localizes the fixed points of `psi(t, .)` in `x_box` on each of `grid`
/// parameter cells (with `t` interval-valued) and searches the overlap
/// graph of the resulting slabs for a shortest chain from a slab at `t = a`
/// to one at `t = b`. `budget` caps the boxes per cell.
pub fn trace_continuum(
    psi: &MapSpec,
    t_range: Interval,
    x_box: &RectDomain,
    grid: usize,
    tol: f64,
    budget: usize,
) -> Result<ContinuumWitness> {
    if !psi.has_param() {
        return Err(Error::InvalidArgument("the family needs 'param t'".into()));
    }
    if grid == 0 {
        return Err(Error::InvalidArgument("grid must be at least 1".into()));
    }
    if !(t_range.width() > 0.0) {
        return Err(Error::InvalidArgument("parameter range needs a < b".into()));
    }
    let t_grid = grid_points(t_range, grid);
    let cells: Vec<Interval> = t_grid
        .windows(2)
        .map(|w| Interval::new(w[0], w[1]))
        .collect::<std::result::Result<_, _>>()?;
    let reports = cells
        .par_iter()
        .map(|&cell| localize_core(psi, x_box, tol, budget, Some(cell)))
        .collect::<Result<Vec<_>>>()?;
    let budget_exhausted = reports.iter().any(|r| r.budget_exhausted);
    let slabs: Vec<Vec<Enclosure>> = reports.into_iter().map(|r| r.enclosures).collect();
    let empty_cells = (0..grid).filter(|&j| slabs[j].is_empty()).collect();

    // nodes in cell order; offsets[j] is the first node of cell j
    let mut offsets = vec![0];
    for s in &slabs {
        offsets.push(offsets.last().unwrap() + s.len());
    }
    let node = |id: usize| {
        let j = offsets.partition_point(|&o| o <= id) - 1;
        (j, &slabs[j][id - offsets[j]].region)
    };
    let total = *offsets.last().unwrap();
    let mut prev = vec![usize::MAX; total];
    let mut seen = vec![false; total];
    let mut queue: VecDeque<usize> = (offsets[0]..offsets[1]).collect();
    for &id in &queue {
        seen[id] = true;
    }
    let mut goal = None;
    let mut furthest: Option<usize> = None;
    while let Some(id) = queue.pop_front() {
        let (j, region) = node(id);
        furthest = Some(furthest.map_or(j, |f| f.max(j)));
        if j + 1 == grid {
            goal = Some(id);
            break;
        }
        let lo = j.saturating_sub(1);
        let hi = (j + 1).min(grid - 1);
        for other in offsets[lo]..offsets[hi + 1] {
            if !seen[other] && node(other).1.intersects(region) {
                seen[other] = true;
                prev[other] = id;
                queue.push_back(other);
            }
        }
    }

    let mut chain = Vec::new();
    if let Some(mut id) = goal {
        loop {
            let (j, region) = node(id);
            chain.push(ChainLink { cell: j, t: cells[j], region: region.clone() });
            if prev[id] == usize::MAX {
                break;
            }
            id = prev[id];
        }
        chain.reverse();
    }
    Ok(ContinuumWitness {
        complete: goal.is_some(),
        cells: grid,
        max_t_reached: furthest.map_or(t_range.lo(), |j| cells[j].hi()),
        t_grid,
        chain,
        empty_cells,
        budget_exhausted,
        start_index: None,
        slabs,
    })
}

/// Verified fixed point index of `psi(a, .)` on `x_box`, in dimensions 1
/// and 2.
pub fn start_index(psi: &MapSpec, t_range: Interval, x_box: &RectDomain) -> Result<i64> {
    let d = fixed_point_index(&psi.substitute_param(t_range.lo()), x_box)?;
    if d.verified {
        Ok(d.value)
    } else {
        Err(Error::BoundaryZeroOrIndeterminate { depth: d.depth })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapdsl::parse_map;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn line() -> RectDomain {
        RectDomain::from_bounds(&[(-1.0, 2.0)]).unwrap()
    }

    fn check_chain(w: &ContinuumWitness) {
        assert!(w.complete);
        assert_eq!(w.chain.first().unwrap().cell, 0);
        assert_eq!(w.chain.last().unwrap().cell, w.cells - 1);
        for pair in w.chain.windows(2) {
            assert!(pair[0].region.intersects(&pair[1].region));
            assert!(pair[0].t.intersects(&pair[1].t));
        }
        assert_eq!(w.max_t_reached, 1.0);
    }

    #[test]
    fn averaging_family_follows_the_diagonal() {
        let psi = parse_map("dim 1\nparam t\nmap g1 = (x1 + t)/2").unwrap();
        let w = trace_continuum(&psi, unit(), &line(), 16, 1e-3, 100_000).unwrap();
        check_chain(&w);
        assert!(w.chain.len() >= 16);
        for link in &w.chain {
            // the fixed point x = t stays within the cell's range
            let x = link.region.coord(0);
            assert!(x.lo() <= link.t.hi() + 1e-3 && x.hi() >= link.t.lo() - 1e-3);
            assert!(x.width() <= 1e-3);
        }
    }

    #[test]
    fn constant_family_is_traced() {
        let psi = parse_map("dim 1\nparam t\nmap g1 = t + 0*x1").unwrap();
        let w = trace_continuum(&psi, unit(), &line(), 16, 1e-3, 100_000).unwrap();
        check_chain(&w);
    }

    #[test]
    fn translation_family_is_empty() {
        let psi = parse_map("dim 1\nparam t\nmap g1 = x1 + 1 + 0*t").unwrap();
        let w = trace_continuum(&psi, unit(), &line(), 16, 1e-3, 100_000).unwrap();
        assert!(!w.complete);
        assert!(w.chain.is_empty());
        assert_eq!(w.max_t_reached, 0.0);
        assert_eq!(w.empty_cells.len(), 16);
    }

    #[test]
    fn start_index_of_the_averaging_family() {
        let psi = parse_map("dim 1\nparam t\nmap g1 = (x1 + t)/2").unwrap();
        assert_eq!(start_index(&psi, unit(), &line()).unwrap(), 1);
    }

    #[test]
    fn needs_a_parameter() {
        let psi = parse_map("dim 1\nmap g1 = x1").unwrap();
        assert!(trace_continuum(&psi, unit(), &line(), 4, 1e-3, 100).is_err());
    }
}

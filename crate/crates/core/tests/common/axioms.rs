//! Randomized instances of the index axioms. Each function draws instances
//! until `want` of them are admissible (every index involved verified) and
//! counts the ones where the axiom fails.

use fixcert::degree::{degree_1d, fixed_point_index, verify_homotopy, winding_degree_2d};
use fixcert::geometry::RectDomain;
use fixcert::localize::localize_fixed_points;
use fixcert::mapdsl::{parse_map, MapSpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{lit, rng};

#[derive(Debug, Default, Clone, Copy)]
pub struct Tally {
    pub instances: usize,
    pub failures: usize,
}

const DEPTH: usize = 16;
const MAX_DRAWS: usize = 5000;

/// `f = Id - F` with `F` a random quadratic planar polynomial.
fn random_planar(rng: &mut ChaCha8Rng) -> MapSpec {
    let poly = |rng: &mut ChaCha8Rng| {
        format!(
            "{} + {}*x1 + {}*x2 + {}*x1^2 + {}*x1*x2 + {}*x2^2",
            lit(rng, -0.5, 0.5),
            lit(rng, -1.5, 1.5),
            lit(rng, -1.5, 1.5),
            lit(rng, -1.0, 1.0),
            lit(rng, -1.0, 1.0),
            lit(rng, -1.0, 1.0)
        )
    };
    let (p, q) = (poly(rng), poly(rng));
    parse_map(&format!("dim 2\nmap g1 = x1 - ({p})\nmap g2 = x2 - ({q})")).unwrap()
}

fn random_line_map(rng: &mut ChaCha8Rng, var: &str) -> String {
    format!(
        "{} - ({} + {}*{var} + {}*{var}^2 + {}*{var}^3)",
        var,
        lit(rng, -0.5, 0.5),
        lit(rng, -2.0, 2.0),
        lit(rng, -1.0, 1.0),
        lit(rng, -1.0, 1.0)
    )
}

fn square() -> RectDomain {
    RectDomain::from_bounds(&[(-1.0, 1.0), (-1.0, 1.0)]).unwrap()
}

fn index2(f: &MapSpec, r: &RectDomain) -> Option<i64> {
    winding_degree_2d(f, r, DEPTH).ok().filter(|d| d.verified).map(|d| d.value)
}

pub fn additivity(seed: u64, want: usize) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    for _ in 0..MAX_DRAWS {
        if t.instances == want {
            break;
        }
        let f = random_planar(&mut rng);
        let cut = rng.gen_range(-0.7..0.7);
        let left = RectDomain::from_bounds(&[(-1.0, cut), (-1.0, 1.0)]).unwrap();
        let right = RectDomain::from_bounds(&[(cut, 1.0), (-1.0, 1.0)]).unwrap();
        let (Some(w), Some(a), Some(b)) = (index2(&f, &square()), index2(&f, &left), index2(&f, &right)) else {
            continue;
        };
        // pick up the interesting cases: some zero inside
        if a == 0 && b == 0 && rng.gen_bool(0.7) {
            continue;
        }
        t.instances += 1;
        if w != a + b {
            t.failures += 1;
        }
    }
    t
}

/// Constant maps over a grid of points that avoids the boundary.
pub fn weak_normalization() -> Tally {
    let mut t = Tally::default();
    let r = RectDomain::from_bounds(&[(0.0, 1.0), (0.0, 1.0)]).unwrap();
    let line = RectDomain::from_bounds(&[(0.0, 1.0)]).unwrap();
    for i in 0..21 {
        let px = -0.475 + 0.1 * i as f64;
        let f = parse_map(&format!("dim 1\nmap g1 = {px}")).unwrap();
        let expect = i64::from((0.0..=1.0).contains(&px));
        t.instances += 1;
        if degree_1d(&f, &line).map(|d| d.value).ok() != Some(expect) {
            t.failures += 1;
        }
        for j in 0..21 {
            let py = -0.475 + 0.1 * j as f64;
            let f = parse_map(&format!("dim 2\nmap g1 = {px}\nmap g2 = {py}")).unwrap();
            let inside = (0.0..=1.0).contains(&px) && (0.0..=1.0).contains(&py);
            t.instances += 1;
            if index2(&f, &r) != Some(i64::from(inside)) {
                t.failures += 1;
            }
        }
    }
    t
}

pub fn fixed_point_property(seed: u64, want: usize) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    for _ in 0..MAX_DRAWS {
        if t.instances == want {
            break;
        }
        let f = random_planar(&mut rng);
        match index2(&f, &square()) {
            Some(v) if v != 0 => {}
            _ => continue,
        }
        let rep = localize_fixed_points(&f, &square(), 1e-4, 200_000).unwrap();
        t.instances += 1;
        if rep.enclosures.is_empty() {
            t.failures += 1;
        }
    }
    t
}

/// Cutting off an edge strip that pruning clears entirely leaves the index
/// unchanged.
pub fn excision(seed: u64, want: usize) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    for _ in 0..MAX_DRAWS {
        if t.instances == want {
            break;
        }
        let f = random_planar(&mut rng);
        let cut = rng.gen_range(0.2..0.9);
        let strip = RectDomain::from_bounds(&[(cut, 1.0), (-1.0, 1.0)]).unwrap();
        let rest = RectDomain::from_bounds(&[(-1.0, cut), (-1.0, 1.0)]).unwrap();
        let cleared = localize_fixed_points(&f, &strip, 1e-3, 100_000)
            .is_ok_and(|r| r.enclosures.is_empty() && !r.budget_exhausted);
        if !cleared {
            continue;
        }
        let (Some(whole), Some(part)) = (index2(&f, &square()), index2(&f, &rest)) else { continue };
        t.instances += 1;
        if whole != part {
            t.failures += 1;
        }
    }
    t
}

pub fn homotopy_invariance(seed: u64, want: usize) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    for _ in 0..MAX_DRAWS {
        if t.instances == want {
            break;
        }
        let f = random_planar(&mut rng);
        let g = random_planar(&mut rng);
        let h = MapSpec::homotopy(&f, &g).unwrap();
        if verify_homotopy(&h, &square(), DEPTH).is_err() {
            continue;
        }
        let (Some(a), Some(b)) = (index2(&f, &square()), index2(&g, &square())) else { continue };
        t.instances += 1;
        if a != b {
            t.failures += 1;
        }
    }
    t
}

pub fn multiplicativity(seed: u64, want: usize) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    let line = RectDomain::from_bounds(&[(-1.0, 1.0)]).unwrap();
    for _ in 0..MAX_DRAWS {
        if t.instances == want {
            break;
        }
        let (p, q) = (random_line_map(&mut rng, "x1"), random_line_map(&mut rng, "x2"));
        let f1 = parse_map(&format!("dim 1\nmap g1 = {p}")).unwrap();
        let f2 = parse_map(&format!("dim 1\nmap g1 = {}", q.replace("x2", "x1"))).unwrap();
        let prod = parse_map(&format!("dim 2\nmap g1 = {p}\nmap g2 = {q}")).unwrap();
        let (Ok(a), Ok(b)) = (degree_1d(&f1, &line), degree_1d(&f2, &line)) else { continue };
        let Some(c) = index2(&prod, &square()) else { continue };
        t.instances += 1;
        if c != a.value * b.value {
            t.failures += 1;
        }
    }
    t
}

/// Two fixed points of opposite index: `Id - f = (x1^2 - 1/4, x2)`.
pub fn two_zero_localization() -> Tally {
    let mut t = Tally::default();
    let f = parse_map("dim 2\nmap g1 = x1 - (x1^2 - 0.25)\nmap g2 = 0*x2").unwrap();
    let left = RectDomain::from_bounds(&[(-1.0, 0.0), (-1.0, 1.0)]).unwrap();
    let right = RectDomain::from_bounds(&[(0.0, 1.0), (-1.0, 1.0)]).unwrap();
    let checks = [
        index2(&f, &square()) == Some(0),
        index2(&f, &left).is_some_and(|v| v.abs() == 1),
        index2(&f, &right).is_some_and(|v| v.abs() == 1),
        index2(&f, &left).zip(index2(&f, &right)).is_some_and(|(a, b)| a + b == 0),
        fixed_point_index(&f, &left).is_ok(),
        localize_fixed_points(&f, &left, 1e-6, 100_000).is_ok_and(|r| r.proven().count() >= 1),
        localize_fixed_points(&f, &right, 1e-6, 100_000).is_ok_and(|r| r.proven().count() >= 1),
    ];
    for ok in checks {
        t.instances += 1;
        if !ok {
            t.failures += 1;
        }
    }
    t
}

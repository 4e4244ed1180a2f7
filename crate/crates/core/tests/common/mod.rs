#![allow(dead_code)]
pub mod axioms;

use fixcert::geometry::{ConeShellSpec, DomainSpec};
use fixcert::mapdsl::MapSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Literal with a few significant digits, always parseable.
pub fn lit(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> String {
    format!("{:.3}", rng.gen_range(lo..hi))
}

/// Random expression over `x1..x{dim}` (and `t` when `param`), mixing every
/// operator and function of the map language.
pub fn random_expr(rng: &mut ChaCha8Rng, dim: usize, depth: usize, param: bool) -> String {
    let leaf = |rng: &mut ChaCha8Rng| -> String {
        match rng.gen_range(0..4) {
            0 => lit(rng, -2.0, 2.0),
            1 if param => "t".to_string(),
            _ => format!("x{}", rng.gen_range(1..=dim)),
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    let sub = |rng: &mut ChaCha8Rng| random_expr(rng, dim, depth - 1, param);
    match rng.gen_range(0..16) {
        0 | 1 => leaf(rng),
        2 => format!("({} + {})", sub(rng), sub(rng)),
        3 => format!("({} - {})", sub(rng), sub(rng)),
        4 | 5 => format!("({} * {})", sub(rng), sub(rng)),
        6 => format!("({} / {})", sub(rng), sub(rng)),
        7 => format!("(-{})", sub(rng)),
        8 => format!("({})^{}", sub(rng), rng.gen_range(0..5)),
        9 => format!("sin({})", sub(rng)),
        10 => format!("cos({})", sub(rng)),
        11 => format!("exp({})", sub(rng)),
        12 => format!("tanh({})", sub(rng)),
        13 => format!("sqrt({})", sub(rng)),
        14 => format!("abs({})", sub(rng)),
        _ => {
            let f = if rng.gen_bool(0.5) { "min" } else { "max" };
            format!("{f}({}, {})", sub(rng), sub(rng))
        }
    }
}

pub fn map_source(comps: &[String], param: bool) -> String {
    let mut s = format!("dim {}\n", comps.len());
    if param {
        s.push_str("param t\n");
    }
    for (i, c) in comps.iter().enumerate() {
        s.push_str(&format!("map g{} = {}\n", i + 1, c));
    }
    s
}

pub fn residual(g: &MapSpec, x: &[f64], t: Option<f64>) -> f64 {
    match g.eval_real(x, t) {
        Ok(y) => y.iter().zip(x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
        Err(_) => f64::INFINITY,
    }
}

pub fn in_domain(d: &DomainSpec, x: &[f64]) -> bool {
    match d {
        DomainSpec::Rect(r) => r.as_box().contains_point(x).unwrap_or(false),
        DomainSpec::Cylinder(c) => c.as_box().contains_point(x).unwrap_or(false),
        DomainSpec::ConeShell(s) => in_shell(s, x),
        DomainSpec::HoledBall(h) => {
            let r = x[0].hypot(x[1]);
            r <= h.outer_radius
                && h.holes.iter().all(|k| (x[0] - k.center[0]).hypot(x[1] - k.center[1]) >= k.radius)
        }
    }
}

pub fn in_shell(s: &ConeShellSpec, x: &[f64]) -> bool {
    let l = s.functional.eval(x);
    x.iter().all(|&v| v >= 0.0) && l >= s.a && l <= s.b
}

/// Axis-aligned bounds of a domain.
pub fn bounds(d: &DomainSpec) -> Vec<(f64, f64)> {
    let b = match d {
        DomainSpec::Rect(r) => r.as_box().clone(),
        DomainSpec::Cylinder(c) => c.as_box(),
        DomainSpec::ConeShell(s) => s.sublevel_box(s.b),
        DomainSpec::HoledBall(h) => {
            let r = h.outer_radius;
            return vec![(-r, r), (-r, r)];
        }
    };
    b.coords().iter().map(|c| (c.lo(), c.hi())).collect()
}

fn grid_points(center: &[f64], half: &[f64], n: usize) -> Vec<Vec<f64>> {
    let dim = center.len();
    let total = n.pow(dim as u32);
    (0..total)
        .map(|mut k| {
            (0..dim)
                .map(|i| {
                    let j = k % n;
                    k /= n;
                    center[i] - half[i] + 2.0 * half[i] * (j as f64) / ((n - 1) as f64)
                })
                .collect()
        })
        .collect()
}

fn residual_vec(g: &MapSpec, x: &[f64]) -> Option<Vec<f64>> {
    let y = g.eval_real(x, None).ok()?;
    Some(y.iter().zip(x).map(|(a, b)| a - b).collect())
}

/// Solves the small dense system `m z = v` by Gaussian elimination with
/// partial pivoting.
fn solve(mut m: Vec<Vec<f64>>, mut v: Vec<f64>) -> Option<Vec<f64>> {
    let n = v.len();
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))?;
        if m[p][c].abs() < 1e-300 {
            return None;
        }
        m.swap(c, p);
        v.swap(c, p);
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
            v[r] -= f * v[c];
        }
    }
    let mut z = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| m[r][k] * z[k]).sum();
        z[r] = (v[r] - s) / m[r][r];
    }
    Some(z)
}

/// One damped Gauss-Newton step for `g(x) - x = 0` with a forward
/// difference Jacobian, clamped into `bounds`. Returns the best improving
/// candidate over a ladder of damping factors.
fn newton_step(g: &MapSpec, d: &DomainSpec, bounds: &[(f64, f64)], x: &[f64], rx: f64) -> Option<(Vec<f64>, f64)> {
    let n = x.len();
    let f = residual_vec(g, x)?;
    let mut jac = vec![vec![0.0; n]; n];
    for j in 0..n {
        let h = 1e-7 * x[j].abs().max(1.0);
        let mut xp = x.to_vec();
        xp[j] += h;
        let fp = residual_vec(g, &xp)?;
        for i in 0..n {
            jac[i][j] = (fp[i] - f[i]) / h;
        }
    }
    let jtj: Vec<Vec<f64>> =
        (0..n).map(|a| (0..n).map(|b| (0..n).map(|i| jac[i][a] * jac[i][b]).sum()).collect()).collect();
    let jtf: Vec<f64> = (0..n).map(|a| -(0..n).map(|i| jac[i][a] * f[i]).sum::<f64>()).collect();
    let scale = (0..n).map(|a| jtj[a][a]).fold(1e-300, f64::max);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for mu in [0.0, 1e-12, 1e-8, 1e-4, 1e-2, 1.0] {
        let mut m = jtj.clone();
        for a in 0..n {
            m[a][a] += mu * scale;
        }
        let Some(z) = solve(m, jtf.clone()) else { continue };
        for damp in [1.0, 0.5, 0.1] {
            let cand: Vec<f64> =
                (0..n).map(|i| (x[i] + damp * z[i]).clamp(bounds[i].0, bounds[i].1)).collect();
            if !in_domain(d, &cand) {
                continue;
            }
            let r = residual(g, &cand, None);
            if r < rx && best.as_ref().map_or(true, |b| r < b.1) {
                best = Some((cand, r));
            }
        }
    }
    best
}

/// Dense-grid search for a fixed point of `g` inside `d`: a coarse grid
/// over the bounding box, then local refinement (damped Newton steps and a
/// pattern search) from the best grid points. Returns the first point found
/// with residual at most `target`.
pub fn grid_fixed_point(g: &MapSpec, d: &DomainSpec, target: f64) -> Option<(Vec<f64>, f64)> {
    let b = bounds(d);
    let dim = b.len();
    let center: Vec<f64> = b.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect();
    let half: Vec<f64> = b.iter().map(|(lo, hi)| 0.5 * (hi - lo)).collect();
    let coarse = if dim == 1 { 4001 } else { 161 };
    let mut scored: Vec<(f64, Vec<f64>)> = grid_points(&center, &half, coarse)
        .into_iter()
        .filter(|p| in_domain(d, p))
        .map(|p| (residual(g, &p, None), p))
        .filter(|(r, _)| r.is_finite())
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let step: Vec<f64> = half.iter().map(|h| 2.0 * h / ((coarse - 1) as f64)).collect();
    for (r0, start) in scored.into_iter().take(24) {
        if r0 <= target {
            return Some((start, r0));
        }
        let (mut best, mut best_r) = (start, r0);
        let mut h: Vec<f64> = step.clone();
        for _ in 0..2000 {
            let mut moved = false;
            if let Some((x, r)) = newton_step(g, d, &b, &best, best_r) {
                best = x;
                best_r = r;
                moved = true;
            }
            for p in grid_points(&best.clone(), &h, 5) {
                if in_domain(d, &p) {
                    let r = residual(g, &p, None);
                    if r < best_r {
                        best_r = r;
                        best = p;
                        moved = true;
                    }
                }
            }
            if best_r <= target {
                return Some((best, best_r));
            }
            let f = if moved { 1.5 } else { 0.5 };
            h.iter_mut().for_each(|v| *v *= f);
            if h.iter().all(|v| *v < 1e-16) {
                break;
            }
        }
    }
    face_fixed_point(g, d, &b, target)
}

/// The search of [`grid_fixed_point`] restricted to the faces of the
/// bounding box of a planar domain, where a valley of small residuals
/// along a curve can hide a fixed point sitting on the boundary.
fn face_fixed_point(g: &MapSpec, d: &DomainSpec, b: &[(f64, f64)], target: f64) -> Option<(Vec<f64>, f64)> {
    if b.len() != 2 {
        return None;
    }
    for pinned in 0..2 {
        let free = 1 - pinned;
        for level in [b[pinned].0, b[pinned].1] {
            let at = |s: f64| {
                let mut x = vec![0.0; 2];
                x[pinned] = level;
                x[free] = s;
                x
            };
            let score = |s: f64| {
                let x = at(s);
                if in_domain(d, &x) { residual(g, &x, None) } else { f64::INFINITY }
            };
            let (lo, hi) = b[free];
            let n = 4001;
            let mut scored: Vec<(f64, f64)> = (0..n)
                .map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64)
                .map(|s| (score(s), s))
                .filter(|(r, _)| r.is_finite())
                .collect();
            scored.sort_by(|x, y| x.0.total_cmp(&y.0));
            for (r0, s0) in scored.into_iter().take(8) {
                let (mut s, mut r) = (s0, r0);
                let mut h = (hi - lo) / (n - 1) as f64;
                while h > 1e-17 && r > target {
                    let (rl, rr) = (score((s - h).max(lo)), score((s + h).min(hi)));
                    if rl < r && rl <= rr {
                        s = (s - h).max(lo);
                        r = rl;
                        h *= 1.5;
                    } else if rr < r {
                        s = (s + h).min(hi);
                        r = rr;
                        h *= 1.5;
                    } else {
                        h *= 0.5;
                    }
                }
                if r <= target {
                    return Some((at(s), r));
                }
            }
        }
    }
    None
}

use fixcert::geometry::{CylinderSpec, Functional, Hole, HoledBallSpec, RectDomain};
use fixcert::interval::{Interval, IntervalBox};
use fixcert::mapdsl::parse_map;
use fixcert::problem::{Problem, Settings};

pub fn problem(src: &str, domain: DomainSpec) -> Problem {
    Problem { map: parse_map(src).unwrap(), domain, settings: Settings::default() }
}

fn rect_problem(rng: &mut ChaCha8Rng, dim: usize) -> Problem {
    let bounds: Vec<(f64, f64)> = (0..dim)
        .map(|_| {
            let lo = rng.gen_range(-2.0..2.0);
            (lo, lo + rng.gen_range(0.2..2.0))
        })
        .collect();
    let comps: Vec<String> = (0..dim)
        .map(|i| {
            let (lo, hi) = bounds[i];
            let w = hi - lo;
            let p = lit(rng, lo - 0.3 * w, hi + 0.3 * w);
            let s = lit(rng, -3.0, 3.0);
            let j = (i + 1) % dim;
            let e = lit(rng, 0.0, 0.3);
            format!("{p} + {s}*(x{} - {p}) + {e}*sin(3*x{})", i + 1, j + 1)
        })
        .collect();
    let domain = DomainSpec::Rect(RectDomain::from_bounds(&bounds).unwrap());
    problem(&map_source(&comps, false), domain)
}

fn cylinder_problem(rng: &mut ChaCha8Rng) -> Problem {
    let (a, c) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let (b, d) = (a + rng.gen_range(0.3..2.0), c + rng.gen_range(0.3..2.0));
    let p = lit(rng, a - 0.5, b + 0.5);
    let s = lit(rng, -3.0, 3.0);
    let e = lit(rng, 0.0, 0.3);
    let q = lit(rng, c - 0.3, d + 0.3);
    let k = lit(rng, -0.9, 0.9);
    let e2 = lit(rng, 0.0, 0.2);
    let comps = [
        format!("{p} + {s}*(x1 - {p}) + {e}*cos(x2)"),
        format!("{q} + {k}*(x2 - {q}) + {e2}*sin(x1)"),
    ];
    let domain = DomainSpec::Cylinder(
        CylinderSpec::new(Interval::new(a, b).unwrap(), IntervalBox::from_bounds(&[(c, d)]).unwrap()).unwrap(),
    );
    problem(&map_source(&comps, false), domain)
}

fn cone_problem(rng: &mut ChaCha8Rng) -> Problem {
    let (functional, l) = match rng.gen_range(0..3) {
        0 => (Functional::Linear(vec![1.0, 1.0]), "(x1 + x2)".to_string()),
        1 => (Functional::Euclid, "sqrt(x1^2 + x2^2)".to_string()),
        _ => {
            let c = [rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)];
            let s = format!("({:.3}*x1 + {:.3}*x2)", c[0], c[1]);
            let c = [format!("{:.3}", c[0]).parse().unwrap(), format!("{:.3}", c[1]).parse().unwrap()];
            (Functional::Linear(c.to_vec()), s)
        }
    };
    let a = rng.gen_range(0.2..1.0);
    let b = a * rng.gen_range(1.5..4.0);
    let m = lit(rng, 0.5 * a, 1.2 * b);
    let k = [-1, 1, 2][rng.gen_range(0..3)];
    let e = lit(rng, 0.0, 0.1);
    let comps = [
        format!("({l}/{m})^{k}*x1 + {e}*x2"),
        format!("({l}/{m})^{k}*x2"),
    ];
    let domain = DomainSpec::ConeShell(fixcert::geometry::ConeShellSpec::new(2, functional, a, b).unwrap());
    problem(&map_source(&comps, false), domain)
}

fn holes_problem(rng: &mut ChaCha8Rng) -> Problem {
    let r: f64 = rng.gen_range(3.0..5.0);
    let c: f64 = rng.gen_range(1.0..0.6 * r);
    let hr = rng.gen_range(0.1..0.4 * c.min(r - c));
    let amp = lit(rng, 0.5, 1.2 * r);
    let beta = lit(rng, 0.5, 3.0);
    let e = lit(rng, 0.0, 0.3);
    let comps = [format!("{amp}*tanh({beta}*x1)"), format!("{e}*sin(x2)")];
    let holes = vec![Hole { center: [c, 0.0], radius: hr }, Hole { center: [-c, 0.0], radius: hr }];
    let domain = DomainSpec::HoledBall(HoledBallSpec::new(r, holes).unwrap());
    problem(&map_source(&comps, false), domain)
}

/// Randomized certification corpus: rectangles in dimensions 1 and 2,
/// cylinders, cone shells under three functionals, and two-hole discs.
pub fn certification_corpus(seed: u64, n: usize) -> Vec<Problem> {
    let mut rng = rng(seed);
    (0..n)
        .map(|k| match k % 10 {
            0 | 1 => rect_problem(&mut rng, 1),
            2..=5 => rect_problem(&mut rng, 2),
            6 | 7 => cylinder_problem(&mut rng),
            8 => cone_problem(&mut rng),
            _ => holes_problem(&mut rng),
        })
        .collect()
}

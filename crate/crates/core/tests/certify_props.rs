mod common;

use common::{certification_corpus, grid_fixed_point};
use fixcert::certify::{
    certify_cylinder, certify_miranda, Direction, Directions, Form, Outcome,
};
use fixcert::cli::certify_problem;
use fixcert::geometry::{compressive_to_expansive, flip_coordinates, DomainSpec};
use fixcert::interval::IntervalBox;

#[test]
fn certificates_are_sound_on_a_random_corpus() {
    let corpus = certification_corpus(11, 300);
    let mut certified = 0;
    for p in &corpus {
        let c = certify_problem(p, None, Some(16)).unwrap();
        if c.outcome == Outcome::Certified {
            certified += 1;
            let found = grid_fixed_point(&p.map, &p.domain, 1e-6);
            assert!(found.is_some(), "no fixed point found for certified\n{}{:?}", p.map, p.domain);
        }
    }
    assert!(certified >= 60, "only {certified} certified");
}

#[test]
fn refuted_witnesses_reevaluate_as_violations() {
    let mut refuted = 0;
    for p in certification_corpus(12, 200) {
        let c = certify_problem(&p, None, Some(12)).unwrap();
        if c.outcome != Outcome::Refuted {
            continue;
        }
        refuted += 1;
        assert!(!c.witness.is_empty());
        for w in &c.witness {
            assert!(w.region.contains_point(&w.point).unwrap());
            assert!(w.relation.violated(w.value, w.threshold), "{w:?}");
            // Miranda witnesses sit on a face: recheck g_i at the point alone
            if let (DomainSpec::Rect(_), Some(i)) = (&p.domain, miranda_axis(&w.condition)) {
                let point = IntervalBox::from_point(&w.point).unwrap();
                let v = p.map.eval_component_interval(i, &point, None, false).unwrap();
                assert!(w.relation.violated(v, w.threshold), "{w:?} at {v}");
            }
        }
    }
    assert!(refuted >= 20, "only {refuted} refuted");
}

/// Coordinate index of a Miranda condition label such as `(c2) on x2+`.
fn miranda_axis(condition: &str) -> Option<usize> {
    let digits: String = condition.chars().skip(2).take_while(|c| c.is_ascii_digit()).collect();
    digits.parse::<usize>().ok().map(|k| k - 1)
}

#[test]
fn certified_stays_certified_at_greater_depth() {
    for p in certification_corpus(13, 120) {
        let shallow = certify_problem(&p, None, Some(8)).unwrap();
        if shallow.outcome == Outcome::Certified {
            for depth in [12, 16] {
                assert_eq!(certify_problem(&p, None, Some(depth)).unwrap().outcome, Outcome::Certified);
            }
        }
    }
}

#[test]
fn compressive_equals_expansive_of_the_transformed_map() {
    for p in certification_corpus(14, 100).into_iter().filter(|p| matches!(p.domain, DomainSpec::Cylinder(_))) {
        let DomainSpec::Cylinder(c) = &p.domain else { unreachable!() };
        let mut comp = certify_cylinder(&p.map, c, Form::Compressive, 12).unwrap();
        let mut exp = certify_cylinder(&compressive_to_expansive(&p.map).unwrap(), c, Form::Expansive, 12).unwrap();
        comp.stabilize();
        exp.stabilize();
        assert_eq!(comp.outcome, exp.outcome);
        assert_eq!(comp.evidence, exp.evidence);
        assert_eq!(comp.witness, exp.witness);
    }
}

#[test]
fn flipped_maps_certify_with_swapped_directions() {
    for p in certification_corpus(15, 100) {
        let DomainSpec::Rect(r) = &p.domain else { continue };
        let n = r.dim();
        for mask in 0..(1u32 << n) {
            let dirs: Vec<Direction> =
                (0..n).map(|i| if mask >> i & 1 == 1 { Direction::E } else { Direction::C }).collect();
            let flip: Vec<usize> = (0..n).filter(|i| i % 2 == 0).collect();
            let swapped: Vec<Direction> =
                dirs.iter().enumerate().map(|(i, d)| if flip.contains(&i) { d.swapped() } else { *d }).collect();
            let a = certify_miranda(&p.map, r, &Directions::Fixed(dirs), 12).unwrap();
            let g = flip_coordinates(&p.map, &flip).unwrap();
            let b = certify_miranda(&g, r, &Directions::Fixed(swapped), 12).unwrap();
            assert_eq!(a.outcome, b.outcome, "{}", p.map);
        }
    }
}

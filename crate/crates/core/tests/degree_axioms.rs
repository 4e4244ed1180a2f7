mod common;

use common::axioms::{self, Tally};

fn check(name: &str, t: Tally, want: usize) {
    assert!(t.instances >= want, "{name}: only {} admissible instances", t.instances);
    assert_eq!(t.failures, 0, "{name}: {} of {} instances fail", t.failures, t.instances);
}

#[test]
fn additivity() {
    check("additivity", axioms::additivity(101, 50), 50);
}

#[test]
fn weak_normalization() {
    check("weak normalization", axioms::weak_normalization(), 21 * 22);
}

#[test]
fn fixed_point_property() {
    check("fixed point property", axioms::fixed_point_property(102, 50), 50);
}

#[test]
fn excision() {
    check("excision", axioms::excision(103, 50), 50);
}

#[test]
fn homotopy_invariance() {
    check("homotopy invariance", axioms::homotopy_invariance(104, 20), 20);
}

#[test]
fn multiplicativity() {
    check("multiplicativity", axioms::multiplicativity(105, 20), 20);
}

#[test]
fn two_zero_localization() {
    check("two zeros", axioms::two_zero_localization(), 7);
}

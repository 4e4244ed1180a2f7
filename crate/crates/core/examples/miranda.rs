//! Fixed point certificates on rectangles from the face conditions.

use fixcert::certify::{certify_miranda, Direction, Directions, DEFAULT_MAX_DEPTH};
use fixcert::geometry::RectDomain;
use fixcert::mapdsl::parse_map;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let square = RectDomain::from_bounds(&[(0.0, 1.0), (0.0, 1.0)])?;
    let g = parse_map("dim 2\nmap g1 = 2*x1 - 0.5\nmap g2 = 0.25 + 0.5*x2")?;

    let auto = certify_miranda(&g, &square, &Directions::Auto, DEFAULT_MAX_DEPTH)?;
    println!("auto: {:?} with directions {:?}", auto.outcome, auto.directions);

    let wrong = Directions::Fixed(vec![Direction::C, Direction::C]);
    let c = certify_miranda(&g, &square, &wrong, DEFAULT_MAX_DEPTH)?;
    println!("forcing (c, c): {:?}", c.outcome);
    for w in &c.witness {
        println!("  {} fails at {:?}: value {} vs {}", w.condition, w.point, w.value, w.threshold);
    }

    let unit = RectDomain::from_bounds(&[(0.0, 1.0)])?;
    let shift = parse_map("dim 1\nmap g1 = x1 + 1")?;
    let c = certify_miranda(&shift, &unit, &Directions::Auto, DEFAULT_MAX_DEPTH)?;
    println!("x + 1: {:?}, {} witnesses", c.outcome, c.witness.len());
    println!("{}", auto.to_json());
    Ok(())
}

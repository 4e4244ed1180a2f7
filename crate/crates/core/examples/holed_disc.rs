//! Discs with holes: boundary conditions and the resulting index.

use fixcert::certify::certify_holes_cross_checked;
use fixcert::geometry::{Hole, HoledBallSpec};
use fixcert::mapdsl::parse_map;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let holes = vec![
        Hole { center: [2.0, 0.0], radius: 0.5 },
        Hole { center: [-2.0, 0.0], radius: 0.5 },
    ];
    let disc = HoledBallSpec::new(4.0, holes)?;
    let t = parse_map("dim 2\nmap g1 = 2*tanh(x1)\nmap g2 = 0*x2")?;
    let c = certify_holes_cross_checked(&t, &disc, 20)?;
    println!("2 tanh: {:?}, index {:?}, boundary winding {:?}", c.outcome, c.index, c.index_check);

    let stuck = parse_map("dim 2\nmap g1 = 2 + 0*x1\nmap g2 = 0.1 + 0*x2")?;
    let c = certify_holes_cross_checked(&stuck, &disc, 20)?;
    println!("constant in hole 1: {:?} on {}", c.outcome, c.witness[0].condition);

    match HoledBallSpec::new(4.0, vec![Hole { center: [2.0, 0.0], radius: 0.5 }]) {
        Ok(_) => unreachable!(),
        Err(e) => println!("one hole: {e}"),
    }
    Ok(())
}

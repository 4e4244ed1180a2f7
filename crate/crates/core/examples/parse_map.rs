//! The map language: parse, evaluate at points and over boxes, differentiate.

use fixcert::interval::IntervalBox;
use fixcert::mapdsl::parse_map;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rotation = parse_map("dim 2\nmap g1 = -x2\nmap g2 = x1")?;
    println!("rotation(1, 0) = {:?}", rotation.eval_real(&[1.0, 0.0], None)?);
    let square = IntervalBox::from_bounds(&[(0.0, 1.0), (0.0, 1.0)])?;
    println!("rotation([0,1]^2) in {}", rotation.eval_interval(&square, None)?);

    let family = parse_map("dim 1\nparam t\nmap g1 = (x1 + t)/2")?;
    println!("psi(0.5, 1) = {:?}", family.eval_real(&[1.0], Some(0.5))?);
    let at_zero = family.substitute_param(0.0);
    println!("psi(0, 1) = {:?}", at_zero.eval_real(&[1.0], None)?);

    let g = parse_map("dim 1\nmap g1 = x1*exp(-x1) + tanh(x1)^2")?;
    let dg = g.components()[0].derivative(0).expect("smooth");
    println!("g'(x) = {dg}");

    match parse_map("dim 1\nmap g1 = x1 +") {
        Ok(_) => unreachable!(),
        Err(e) => println!("parse error: {e}"),
    }
    Ok(())
}

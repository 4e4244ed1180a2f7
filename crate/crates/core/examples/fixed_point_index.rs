//! Fixed point index from boundary winding, and homotopy checks.

use fixcert::degree::{fixed_point_index, verify_homotopy};
use fixcert::geometry::RectDomain;
use fixcert::mapdsl::{parse_map, MapSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let unit = RectDomain::from_bounds(&[(0.0, 1.0)])?;
    for src in ["0.5", "x1 + 1", "2*x1 - 0.5"] {
        let f = parse_map(&format!("dim 1\nmap g1 = {src}"))?;
        println!("f = {src}: index {}", fixed_point_index(&f, &unit)?.value);
    }

    let square = RectDomain::from_bounds(&[(-1.0, 1.0), (-1.0, 1.0)])?;
    let squaring = parse_map("dim 2\nmap g1 = x1 - (x1^2 - x2^2)\nmap g2 = x2 - 2*x1*x2")?;
    let d = fixed_point_index(&squaring, &square)?;
    println!("Id - f = (x^2 - y^2, 2xy): degree {} over {} segments", d.value, d.segments);

    let f = parse_map("dim 2\nmap g1 = 0.5*x1\nmap g2 = 0.5*x2")?;
    let g = parse_map("dim 2\nmap g1 = 0.2\nmap g2 = -0.3")?;
    let h = MapSpec::homotopy(&f, &g)?;
    let cells = verify_homotopy(&h, &square, 16)?;
    println!("homotopy is admissible ({cells} cells); both ends have index {}", fixed_point_index(&g, &square)?.value);

    let id = parse_map("dim 2\nmap g1 = x1\nmap g2 = x2")?;
    println!("identity: {}", fixed_point_index(&id, &square).unwrap_err());
    Ok(())
}

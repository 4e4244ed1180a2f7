//! Enclosing every fixed point in a rectangle or a cone shell.

use fixcert::geometry::{ConeShellSpec, RectDomain};
use fixcert::localize::{localize_fixed_points, localize_in_shell};
use fixcert::mapdsl::parse_map;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let unit = RectDomain::from_bounds(&[(0.0, 1.0)])?;
    let cos = parse_map("dim 1\nmap g1 = cos(x1)")?;
    let r = localize_fixed_points(&cos, &unit, 1e-8, 100_000)?;
    for e in &r.enclosures {
        println!("cos: {:?} {}", e.status, e.region);
    }
    println!("  {} boxes examined", r.coverage.boxes_examined);

    let tight = localize_fixed_points(&cos, &unit, 1e-8, 3)?;
    println!("budget 3: {} candidates, exhausted = {}", tight.enclosures.len(), tight.budget_exhausted);

    let shell = ConeShellSpec::sum(2, 0.5, 2.0)?;
    let t = parse_map("dim 2\nmap g1 = (x1 + x2)*x1\nmap g2 = (x1 + x2)*x2")?;
    let s = localize_in_shell(&t, &shell, 1e-7, 2_000_000)?;
    for e in &s.enclosures {
        println!("shell: {:?} level {}", e.status, e.level);
    }
    Ok(())
}

//! Expansive and compressive certificates on cylinders and cone shells.

use fixcert::certify::{certify_cone_shell, certify_cylinder, Form, DEFAULT_MAX_DEPTH};
use fixcert::geometry::{ConeShellSpec, CylinderSpec};
use fixcert::interval::{Interval, IntervalBox};
use fixcert::mapdsl::parse_map;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cyl = CylinderSpec::new(Interval::new(0.0, 1.0)?, IntervalBox::from_bounds(&[(0.0, 1.0)])?)?;
    for (src, form) in [
        ("dim 2\nmap g1 = 2*x1 - 0.5\nmap g2 = 0.25 + 0.5*x2", Form::Expansive),
        ("dim 2\nmap g1 = 0.5\nmap g2 = 0.5", Form::Compressive),
        ("dim 2\nmap g1 = x1 + 1\nmap g2 = x2", Form::Expansive),
    ] {
        let t = parse_map(src)?;
        let c = certify_cylinder(&t, &cyl, form, DEFAULT_MAX_DEPTH)?;
        println!("cylinder {form:?}: {:?}", c.outcome);
    }

    let shell = ConeShellSpec::sum(2, 0.5, 2.0)?;
    let t = parse_map("dim 2\nmap g1 = (x1 + x2)*x1\nmap g2 = (x1 + x2)*x2")?;
    for form in [Form::Expansive, Form::Compressive] {
        let c = certify_cone_shell(&t, &shell, form, DEFAULT_MAX_DEPTH)?;
        println!("(x1 + x2) x, {form:?}: {:?} after {} boxes", c.outcome, c.stats.boxes);
    }

    let shell = ConeShellSpec::sum(2, 1.0, 2.0)?;
    let triple = parse_map("dim 2\nmap g1 = 3*x1\nmap g2 = 3*x2")?;
    let c = certify_cone_shell(&triple, &shell, Form::Expansive, DEFAULT_MAX_DEPTH)?;
    let w = &c.witness[0];
    println!("3x: {:?} on {} at {:?}", c.outcome, w.condition, w.point);
    Ok(())
}

//! Domains and their maps: faces, clamping, cone retraction, shell coordinates.

use fixcert::geometry::{
    clamp_projection, cone_retraction, face, shell_homeomorphism, shell_homeomorphism_inv,
    ConeShellSpec, Functional, RectDomain, Side,
};

fn main() -> fixcert::Result<()> {
    let r = RectDomain::from_bounds(&[(0.0, 1.0), (0.0, 2.0)])?;
    for axis in 0..2 {
        for side in [Side::Minus, Side::Plus] {
            let f = face(&r, axis, side)?;
            println!("face {} = {}", f.id(), f.as_box);
        }
    }
    println!("clamp (3, -1) -> {:?}", clamp_projection(&[3.0, -1.0], &r)?);

    let shell = ConeShellSpec::new(2, Functional::Euclid, 1.0, 2.0)?;
    let p = [0.6, 0.8];
    println!("retract (3, 4) to level 1 from {p:?}: {:?}", cone_retraction(&[3.0, 4.0], 1.0, &shell, &p)?);

    let sum = ConeShellSpec::sum(2, 0.5, 2.0)?;
    let x = [0.3, 0.9];
    let (t, u) = shell_homeomorphism(&x, &sum)?;
    println!("shell coordinates of {x:?}: t = {t}, u = {u:?}");
    println!("and back: {:?}", shell_homeomorphism_inv(t, &u, &sum)?);
    Ok(())
}

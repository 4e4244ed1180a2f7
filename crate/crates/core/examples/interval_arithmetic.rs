//! Outward-rounded interval arithmetic: every result encloses the exact one.

use fixcert::interval::{Interval, IntervalBox};

fn main() -> fixcert::Result<()> {
    let tenth = Interval::point(0.1);
    let sum = tenth.add(tenth)?.add(tenth)?;
    println!("0.1 + 0.1 + 0.1 in {sum}, contains 0.3: {}", sum.contains(0.3));

    let x = Interval::new(-1.0, 2.0)?;
    println!("x = {x}");
    println!("x * x = {}  (dependency problem)", x.mul(x)?);
    println!("x^2   = {}", x.sqr()?);
    println!("exp(x) = {}", x.exp()?);
    println!("cos(x) = {}", x.cos()?);
    match Interval::new(1.0, 2.0)?.div(x) {
        Ok(q) => println!("1/x = {q}"),
        Err(e) => println!("1/x: {e}"),
    }

    let b = IntervalBox::from_bounds(&[(0.0, 1.0), (2.0, 4.0)])?;
    let (left, right) = b.bisect_widest()?;
    println!("{b} splits into {left} and {right}");
    Ok(())
}

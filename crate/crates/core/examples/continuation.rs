//! Chains of enclosures joining the two ends of a parameter range.

use fixcert::continuation::{start_index, trace_continuum};
use fixcert::geometry::RectDomain;
use fixcert::interval::Interval;
use fixcert::mapdsl::parse_map;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t_range = Interval::new(0.0, 1.0)?;
    let x_box = RectDomain::from_bounds(&[(-1.0, 2.0)])?;
    for src in ["(x1 + t)/2", "t + 0*x1", "x1 + 1 + 0*t"] {
        let psi = parse_map(&format!("dim 1\nparam t\nmap g1 = {src}"))?;
        let w = trace_continuum(&psi, t_range, &x_box, 16, 1e-3, 100_000)?;
        println!(
            "psi = {src}: complete = {}, {} links, reached t = {}, {} empty cells",
            w.complete,
            w.chain.len(),
            w.max_t_reached,
            w.empty_cells.len()
        );
        if let (Some(first), Some(last)) = (w.chain.first(), w.chain.last()) {
            println!("  from {} at t in {} to {} at t in {}", first.region, first.t, last.region, last.t);
        }
    }
    let psi = parse_map("dim 1\nparam t\nmap g1 = (x1 + t)/2")?;
    println!("index at t = 0: {}", start_index(&psi, t_range, &x_box)?);
    Ok(())
}

//! Sub-paths along which a function runs from one level to another.

use fixcert::localize::{crossing_from_values, extract_crossing_subpath, PathSamples};

fn main() -> fixcert::Result<()> {
    let path = PathSamples::segment(vec![0.0, 0.0], vec![1.0, 1.0])?;
    let (s0, s1) = extract_crossing_subpath(&path, |p| Ok(3.0 * p[0] - 1.0), 0.0, 1.0)?;
    println!("3s - 1 on [0, 1]: ({s0}, {s1}), from {:?} to {:?}", path.point_at(s0), path.point_at(s1));

    let s = [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0];
    let h = [-1.0, 2.0, -1.0, 2.0];
    println!("oscillating samples: {:?}", crossing_from_values(&s, &h, 0.0, 1.0)?);

    let falling = [2.0, -1.0];
    println!("descending: {:?}", crossing_from_values(&[0.0, 1.0], &falling, 0.0, 1.0)?);
    Ok(())
}

//! The lattice spanned by differences of a configuration and its index.
//!
//! cargo run --example lattice_index

use toric_heights::geometry::lattice_data;

fn show(label: &str, points: &[Vec<i64>]) -> toric_heights::Result<()> {
    let l = lattice_data(points)?;
    let factors: Vec<String> = l.invariant_factors().iter().map(|d| d.to_string()).collect();
    println!(
        "{label}: rank {}, invariant factors [{}], saturation index {}, full: {}",
        l.rank(),
        factors.join(", "),
        l.saturation_index(),
        l.is_full()
    );
    Ok(())
}

fn main() -> toric_heights::Result<()> {
    show("segment 0..2", &[vec![0], vec![1], vec![2]])?;
    show("even points", &[vec![0], vec![2], vec![4]])?;
    show("checkerboard", &[vec![0, 0], vec![1, 1], vec![2, 0], vec![0, 2]])?;
    show("unit square", &[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]])?;
    show("flat in 3d", &[vec![0, 0, 0], vec![1, 0, 0], vec![0, 3, 0]])?;
    Ok(())
}

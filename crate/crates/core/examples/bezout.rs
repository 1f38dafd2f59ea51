//! Height of the intersection of a toric variety with a monomial divisor.
//!
//! cargo run --example bezout

use toric_heights::arith::q;
use toric_heights::invariants::{monomial_bezout, normalized_height, InstanceOptions, ToricInstance};
use toric_heights::places::Coordinate;

fn main() -> toric_heights::Result<()> {
    let alpha: Vec<Coordinate> = [1, 2, 1].iter().map(|&x| Coordinate::rational(q(x))).collect();
    let conic = ToricInstance::from_point(vec![vec![0], vec![1], vec![2]], &alpha, InstanceOptions::default())?;
    println!("height of the conic: {}", normalized_height(&conic)?);
    for b in [[1, 0, 0], [0, 1, 0], [0, 0, 1], [2, 1, 0]] {
        let r = monomial_bezout(&conic, &b)?;
        println!(
            "b = {:?}: D = {}, height {}, bound D·h = {}, holds: {:?}",
            b,
            r.d,
            r.height,
            r.base_height.scale(&r.d.clone().into()),
            r.effective_bound
        );
        for p in &r.places {
            println!("  place {}: cell sum {}", p.place, p.sum);
        }
    }
    Ok(())
}

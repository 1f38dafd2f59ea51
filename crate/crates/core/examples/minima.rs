//! Heights of orbit points next to the height of the variety.
//!
//! cargo run --example minima

use toric_heights::arith::{q, q_frac};
use toric_heights::invariants::{minima_report, InstanceOptions, ToricInstance};
use toric_heights::places::Coordinate;

fn main() -> toric_heights::Result<()> {
    let alpha: Vec<Coordinate> = [1, 2, 1].iter().map(|&x| Coordinate::rational(q(x))).collect();
    let conic = ToricInstance::from_point(vec![vec![0], vec![1], vec![2]], &alpha, InstanceOptions::default())?;
    let samples: Vec<Vec<_>> = [(1, 1), (-1, 1), (1, 2), (-1, 2), (2, 1), (3, 2), (-1, 4)]
        .iter()
        .map(|&(a, b)| vec![q_frac(a, b)])
        .collect();
    let r = minima_report(&conic, &samples)?;
    println!("height {} over degree {} = {}", r.height, r.degree, r.height_per_degree);
    println!("reference h/((n+1)·deg) = {} ≈ {}", r.reference, r.reference.to_decimal(6));
    for (t, h) in &r.samples {
        println!("  t = {}: h = {h} ≈ {}", t[0], h.to_decimal(6));
    }
    if let Some(m) = r.minimum {
        println!("smallest sampled height {m}");
    }
    Ok(())
}

//! Degree, Chow weights and the normalized height of a toric variety.
//!
//! cargo run --example height

use toric_heights::arith::q;
use toric_heights::invariants::{degree, instance_chow_weight, normalized_height, InstanceOptions, ToricInstance};
use toric_heights::places::Coordinate;

fn main() -> toric_heights::Result<()> {
    // the conic through (1 : 2t : t^2)
    let alpha: Vec<Coordinate> = [1, 2, 1].iter().map(|&x| Coordinate::rational(q(x))).collect();
    let conic = ToricInstance::from_point(vec![vec![0], vec![1], vec![2]], &alpha, InstanceOptions::default())?;
    println!("degree {}", degree(&conic));
    for e in conic.weights().entries() {
        println!("chow weight at {}: {}", e.place, instance_chow_weight(&conic, &e.tau)?);
    }
    let h = normalized_height(&conic)?;
    println!("height {h} ≈ {}", h.to_decimal(10));

    // a twisted quadric surface
    let alpha: Vec<Coordinate> = [1, 3, 5, 15].iter().map(|&x| Coordinate::rational(q(x))).collect();
    let pts = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]];
    let surface = ToricInstance::from_point(pts, &alpha, InstanceOptions::default())?;
    let h = normalized_height(&surface)?;
    println!("surface: degree {}, height {h} ≈ {}", degree(&surface), h.to_decimal(10));

    // the configuration {0, 2, 4} only spans 2Z; normalized mode measures against it
    let opts = InstanceOptions {
        normalized_mode: true,
        ..InstanceOptions::default()
    };
    let alpha: Vec<Coordinate> = [1, 2, 1].iter().map(|&x| Coordinate::rational(q(x))).collect();
    let even = ToricInstance::from_point(vec![vec![0], vec![2], vec![4]], &alpha, opts)?;
    println!("even conic in normalized mode: degree {}, height {}", degree(&even), normalized_height(&even)?);
    Ok(())
}

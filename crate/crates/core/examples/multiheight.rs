//! Mixed heights of a product of toric varieties.
//!
//! cargo run --example multiheight

use toric_heights::arith::q;
use toric_heights::invariants::{multiheight_terms, normalized_multiheight, Block, InstanceOptions, MultiInstance};
use toric_heights::places::{weights_from_point, Coordinate};

fn block(points: Vec<Vec<i64>>, alpha: &[i64]) -> toric_heights::Result<Block> {
    let coords: Vec<Coordinate> = alpha.iter().map(|&x| Coordinate::rational(q(x))).collect();
    Ok(Block {
        points,
        weights: weights_from_point(&coords)?,
    })
}

fn main() -> toric_heights::Result<()> {
    // two lines in the plane: c = (1, 2) and (2, 1)
    let line = || vec![vec![0, 0], vec![1, 0], vec![0, 1]];
    for c in [vec![1, 2], vec![2, 1], vec![3, 0]] {
        let m = MultiInstance::new(
            vec![block(line(), &[1, 1, 1])?, block(line(), &[1, 2, 3])?],
            c.clone(),
            InstanceOptions::default(),
        )?;
        println!("c = {:?}: multiheight {}", c, normalized_multiheight(&m)?);
        for (place, lambda, v) in multiheight_terms(&m)? {
            println!("  place {place} (λ = {lambda}): {v}");
        }
    }
    Ok(())
}

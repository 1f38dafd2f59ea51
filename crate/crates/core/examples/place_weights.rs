//! Weight vectors of a point at every place, the product formula and the
//! Weil height.
//!
//! cargo run --example place_weights

use toric_heights::arith::{q, q_frac};
use toric_heights::places::{product_formula_check, weights_from_point, weil_height, Coordinate};

fn main() -> toric_heights::Result<()> {
    let alpha = vec![
        Coordinate::rational(q(1)),
        Coordinate::rational(q_frac(6, 5)),
        Coordinate::rational(q(-12)),
    ];
    let w = weights_from_point(&alpha)?;
    for e in w.entries() {
        let tau: Vec<String> = e.tau.iter().map(|t| t.to_string()).collect();
        println!("place {:>3} (multiplicity {}): [{}]", e.place.to_string(), e.multiplicity, tau.join(", "));
    }
    let pf = product_formula_check(&w);
    println!("product formula holds: {}", pf.passed);
    println!("Weil height of (1 : 6/5 : -12) = {}", weil_height(&w)?);

    // 2^(1/3) is a radical coordinate; its valuations are fractional
    let radical = vec![Coordinate::rational(q(1)), Coordinate::new(q(1), q(2), q_frac(1, 3))?];
    let w = weights_from_point(&radical)?;
    println!("Weil height of (1 : 2^(1/3)) = {}", weil_height(&w)?);
    Ok(())
}

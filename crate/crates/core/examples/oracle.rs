//! Monte-Carlo check of exact integrals and heights.
//!
//! cargo run --release --example oracle

use toric_heights::arith::q;
use toric_heights::cli::{height_oracle, integral_oracle, OracleConfig};
use toric_heights::invariants::{InstanceOptions, ToricInstance};
use toric_heights::places::Coordinate;

fn main() -> toric_heights::Result<()> {
    let alpha: Vec<Coordinate> = [1, 2, 3, 5, 7, 11].iter().map(|&x| Coordinate::rational(q(x))).collect();
    let pts = vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![0, 1], vec![1, 1], vec![0, 2]];
    let inst = ToricInstance::from_point(pts, &alpha, InstanceOptions::default())?;
    let cfg = OracleConfig { samples: 100_000, seed: 42 };
    for (place, _, roof) in inst.roofs()? {
        let e = integral_oracle(&roof, cfg);
        println!(
            "place {place}: exact {:.8}, estimate {:.8} ± {:.8} ({:.2} sigma)",
            e.exact,
            e.estimate,
            e.standard_error,
            e.deviation()
        );
    }
    let e = height_oracle(&inst, cfg)?;
    println!("height: exact {:.8}, estimate {:.8}, agrees: {}", e.exact, e.estimate, e.agrees());
    Ok(())
}

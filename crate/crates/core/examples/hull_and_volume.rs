//! Exact convex hulls, volumes and Minkowski sums.
//!
//! cargo run --example hull_and_volume

use toric_heights::arith::{q_frac, qvec};
use toric_heights::geometry::{convex_hull, minkowski_sum};

fn main() -> toric_heights::Result<()> {
    // a hexagon with an interior point and a repeated vertex
    let pts = vec![
        qvec(&[0, 0]),
        qvec(&[1, 0]),
        qvec(&[2, 1]),
        qvec(&[2, 2]),
        qvec(&[1, 2]),
        qvec(&[0, 1]),
        qvec(&[1, 1]),
        qvec(&[2, 2]),
    ];
    let hex = convex_hull(&pts)?;
    println!("hexagon: {} vertices, {} facets, area {}", hex.vertices().len(), hex.facets().len(), hex.volume());
    for h in hex.facets() {
        let n: Vec<String> = h.normal.iter().map(|x| x.to_string()).collect();
        println!("  <({}), x> <= {}", n.join(", "), h.offset);
    }

    let twice = minkowski_sum(&hex, &hex)?;
    println!("P + P: area {} (4 times {})", twice.volume(), hex.volume());

    let tri = convex_hull(&[vec![q_frac(1, 2), q_frac(0, 1)], qvec(&[3, 0]), vec![q_frac(1, 3), q_frac(5, 2)]])?;
    println!("rational triangle: area {}", tri.volume());

    let seg = convex_hull(&[qvec(&[0, 0, 0]), qvec(&[1, 1, 1]), qvec(&[2, 2, 2])])?;
    println!("segment in R^3: dim {}, {} equations, 3-volume {}", seg.dim(), seg.equations().len(), seg.volume());
    Ok(())
}

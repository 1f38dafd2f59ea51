//! Upper envelope of a weighted configuration: cells, affine pieces,
//! evaluation and the exact integral.
//!
//! cargo run --example roof_function

use toric_heights::arith::{q_frac, qvec};
use toric_heights::envelope::{upper_envelope, WeightedConfig};
use toric_heights::LogValue;

fn lv(s: &str) -> LogValue {
    s.parse().expect("log literal")
}

fn main() -> toric_heights::Result<()> {
    let points = vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2], vec![1, 1]];
    let weights = vec![lv("0"), lv("log(2)"), lv("log(3)"), lv("0"), lv("log(2)")];
    let roof = upper_envelope(&WeightedConfig::new(points.clone(), weights)?)?;

    println!("domain area {}", roof.domain().volume());
    for (k, c) in roof.cells().iter().enumerate() {
        let g: Vec<String> = c.affine().gradient().iter().map(|x| x.to_string()).collect();
        println!(
            "cell {k}: support {:?}, area {}, gradient ({}), constant {}",
            c.support(),
            c.volume(),
            g.join(", "),
            c.affine().constant()
        );
    }
    for i in 0..points.len() {
        println!("point {:?} on roof: {}", points[i], roof.on_roof(i));
    }

    let x = vec![q_frac(1, 2), q_frac(3, 2)];
    let y = roof.evaluate(&x, None)?;
    println!("theta(1/2, 3/2) = {y} ≈ {}", y.to_decimal(10));
    match roof.evaluate(&qvec(&[3, 3]), None) {
        Err(e) => println!("theta(3, 3): {e}"),
        Ok(v) => println!("theta(3, 3) = {v}"),
    }
    let i = roof.integrate();
    println!("integral = {i} ≈ {}", i.to_decimal(10));
    println!("audit passed: {}", roof.audit()?.passed());
    Ok(())
}

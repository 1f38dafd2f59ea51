//! Sup-convolution of roofs and the mixed integral.
//!
//! cargo run --example mixed_integral

use toric_heights::arith::factorial;
use toric_heights::envelope::{mixed_integral, sup_convolution, upper_envelope, WeightedConfig};
use toric_heights::LogValue;

fn roof(points: &[i64], weights: &[&str]) -> toric_heights::Result<toric_heights::envelope::RoofFunction> {
    let pts = points.iter().map(|&a| vec![a]).collect();
    let w = weights.iter().map(|s| s.parse::<LogValue>().expect("log literal")).collect();
    upper_envelope(&WeightedConfig::new(pts, w)?)
}

fn main() -> toric_heights::Result<()> {
    let tent = roof(&[0, 1, 2], &["0", "log(2)", "0"])?;
    let step = roof(&[0, 1], &["log(3)", "0"])?;

    let sum = sup_convolution(&tent, &step)?;
    let ends: Vec<String> = sum.domain().vertices().iter().map(|v| v[0].to_string()).collect();
    println!("tent ⊞ step lives on [{}]", ends.join(", "));
    for (x, h) in sum.roof_vertices() {
        println!("  vertex {} at height {h}", x[0]);
    }

    let mi = mixed_integral(&[tent.clone(), step.clone()])?;
    println!("MI(tent, step) = {mi} ≈ {}", mi.to_decimal(10));
    let swapped = mixed_integral(&[step.clone(), tent.clone()])?;
    println!("MI(step, tent) = {swapped}");

    let diag = mixed_integral(&[tent.clone(), tent.clone()])?;
    let direct = tent.integrate().scale(&factorial(2).into());
    println!("MI(tent, tent) = {diag}, 2!·∫tent = {direct}");
    Ok(())
}

//! Random instances shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_heights::arith::Q;
use toric_heights::envelope::{upper_envelope, RoofFunction, WeightedConfig};
use toric_heights::geometry::{convex_hull, lattice_data};
use toric_heights::invariants::{InstanceOptions, ToricInstance};
use toric_heights::places::Coordinate;
use toric_heights::LogValue;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn qi(x: i64) -> Q {
    Q::from(BigInt::from(x))
}

/// Nonzero rational with numerator and denominator at most `bound` in
/// absolute value.
pub fn rational(rng: &mut impl Rng, bound: i64) -> Q {
    let mut num = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        num = -num;
    }
    Q::new(num.into(), rng.gen_range(1..=bound).into())
}

/// Distinct lattice points in `[0, side]^n` whose differences span `Z^n`.
pub fn configuration(rng: &mut impl Rng, n: usize, max_points: usize) -> Vec<Vec<i64>> {
    let side = if n >= 3 { 1 } else { 2 };
    let mut all: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..n {
        all = all
            .into_iter()
            .flat_map(|p| {
                (0..=side).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    let max_points = max_points.min(all.len());
    loop {
        let k = rng.gen_range(n + 1..=max_points);
        let pts: Vec<Vec<i64>> = all.choose_multiple(rng, k).cloned().collect();
        let full = lattice_data(&pts).map(|l| l.is_full()).unwrap_or(false);
        if !full {
            continue;
        }
        let qs: Vec<Vec<Q>> = pts.iter().map(|p| p.iter().map(|&x| qi(x)).collect()).collect();
        if convex_hull(&qs).map(|h| h.is_full_dimensional()).unwrap_or(false) {
            return pts;
        }
    }
}

pub struct Sample {
    pub points: Vec<Vec<i64>>,
    pub alpha: Vec<Q>,
}

impl Sample {
    pub fn coordinates(&self) -> Vec<Coordinate> {
        self.alpha.iter().cloned().map(Coordinate::rational).collect()
    }

    pub fn instance(&self) -> ToricInstance {
        ToricInstance::from_point(self.points.clone(), &self.coordinates(), InstanceOptions::default())
            .expect("random instance is valid")
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }
}

/// `n ≤ max_n`, at most `max_points` points, coordinates of height at most
/// `bound`.
pub fn sample(rng: &mut impl Rng, max_n: usize, max_points: usize, bound: i64) -> Sample {
    let n = rng.gen_range(1..=max_n);
    let points = configuration(rng, n, max_points);
    let alpha = (0..points.len()).map(|_| rational(rng, bound)).collect();
    Sample { points, alpha }
}

/// Sparse combination of log 2, log 3 and log 5 with small coefficients;
/// ties are common on purpose.
pub fn log_value(rng: &mut impl Rng) -> LogValue {
    let mut terms = Vec::new();
    for p in [2u64, 3, 5] {
        if rng.gen_bool(0.5) {
            terms.push((p, Q::new(rng.gen_range(-4..=4).into(), rng.gen_range(1..=2).into())));
        }
    }
    LogValue::from_terms(terms).expect("primes")
}

pub fn weights(rng: &mut impl Rng, len: usize) -> Vec<LogValue> {
    (0..len).map(|_| log_value(rng)).collect()
}

pub fn roof(points: &[Vec<i64>], w: Vec<LogValue>) -> RoofFunction {
    upper_envelope(&WeightedConfig::new(points.to_vec(), w).expect("config")).expect("roof")
}

pub fn random_roof(rng: &mut impl Rng, n: usize, max_points: usize) -> RoofFunction {
    let pts = configuration(rng, n, max_points);
    let w = weights(rng, pts.len());
    roof(&pts, w)
}

/// Rational points of the domain of `f`: vertices, their midpoints and
/// a few random convex combinations.
pub fn probe_points(rng: &mut impl Rng, f: &RoofFunction) -> Vec<Vec<Q>> {
    let v = f.domain().vertices();
    let mut out: Vec<Vec<Q>> = v.to_vec();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            out.push(v[i].iter().zip(&v[j]).map(|(a, b)| (a + b) / qi(2)).collect());
        }
    }
    for _ in 0..4 {
        let ws: Vec<Q> = v.iter().map(|_| qi(rng.gen_range(0..5))).collect();
        let total: Q = ws.iter().sum();
        if total == qi(0) {
            continue;
        }
        let mut x = vec![qi(0); f.ambient_dim()];
        for (p, w) in v.iter().zip(&ws) {
            for (xi, pi) in x.iter_mut().zip(p) {
                *xi += pi * w;
            }
        }
        out.push(x.into_iter().map(|c| c / &total).collect());
    }
    out
}

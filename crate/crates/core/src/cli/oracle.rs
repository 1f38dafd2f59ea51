//! Monte-Carlo check of exact roof integrals.
//!
//! Points are drawn uniformly from the bounding box of the domain and
//! rejected outside it; the integrand is `θ·1_{Q_A}` scaled by the box
//! volume. Samples are split into fixed shards, each with its own ChaCha
//! stream, and the shard sums are merged in shard order, so the estimate
//! depends only on the seed and sample count.

use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{factorial, Q};
use crate::envelope::RoofFunction;
use crate::error::Result;
use crate::geometry::Polytope;
use crate::invariants::ToricInstance;

pub const SHARDS: u64 = 8;

/// Agreement threshold in standard errors.
pub const SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub samples: u64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            samples: 100_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub exact: f64,
    pub estimate: f64,
    pub standard_error: f64,
}

impl Estimate {
    /// `|estimate - exact|` in standard errors.
    pub fn deviation(&self) -> f64 {
        let diff = (self.estimate - self.exact).abs();
        if self.standard_error > 0.0 {
            diff / self.standard_error
        } else if diff <= 1e-9 * self.exact.abs().max(1.0) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn agrees(&self) -> bool {
        self.deviation() <= SIGMAS
    }
}

fn f(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Float copy of a domain, for membership tests only.
struct FloatDomain {
    facets: Vec<(Vec<f64>, f64)>,
    lo: Vec<f64>,
    width: Vec<f64>,
    box_volume: f64,
}

impl FloatDomain {
    fn new(p: &Polytope) -> Self {
        let facets = p
            .facets()
            .iter()
            .map(|h| (h.normal.iter().map(f).collect(), f(&h.offset)))
            .collect();
        let (lo, hi) = p.bounding_box();
        let lo: Vec<f64> = lo.iter().map(f).collect();
        let width: Vec<f64> = hi.iter().map(f).zip(&lo).map(|(h, l)| h - l).collect();
        let box_volume = width.iter().product();
        Self {
            facets,
            lo,
            width,
            box_volume,
        }
    }

    fn contains(&self, x: &[f64]) -> bool {
        self.facets
            .iter()
            .all(|(n, c)| n.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() <= c + 1e-12)
    }
}

/// Float copy of a roof as the minimum of its affine pieces, which equals
/// the roof on its domain by concavity.
pub(crate) struct FloatRoof {
    pieces: Vec<(Vec<f64>, f64)>,
}

impl FloatRoof {
    pub(crate) fn new(roof: &RoofFunction) -> Self {
        let pieces = roof
            .cells()
            .iter()
            .map(|c| {
                let a = c.affine();
                (a.gradient().iter().map(|g| g.to_f64()).collect(), a.constant().to_f64())
            })
            .collect();
        Self { pieces }
    }

    pub(crate) fn eval(&self, x: &[f64]) -> f64 {
        self.pieces
            .iter()
            .map(|(g, c)| c + g.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Estimates `∫_P g` for a float integrand.
fn integrate_mc(domain: &Polytope, g: impl Fn(&[f64]) -> f64 + Sync, cfg: OracleConfig) -> (f64, f64) {
    if !domain.is_full_dimensional() || cfg.samples == 0 {
        return (0.0, 0.0);
    }
    let d = FloatDomain::new(domain);
    let n = d.lo.len();
    let per = cfg.samples / SHARDS;
    let extra = cfg.samples % SHARDS;
    let sums: Vec<(f64, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..SHARDS)
            .map(|k| {
                let (d, g) = (&d, &g);
                let count = per + u64::from(k < extra);
                s.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    rng.set_stream(k);
                    let mut x = vec![0.0; n];
                    let (mut s1, mut s2) = (0.0, 0.0);
                    for _ in 0..count {
                        for (i, xi) in x.iter_mut().enumerate() {
                            *xi = d.lo[i] + d.width[i] * rng.gen::<f64>();
                        }
                        if d.contains(&x) {
                            let y = g(&x);
                            s1 += y;
                            s2 += y * y;
                        }
                    }
                    (s1, s2)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("oracle shard")).collect()
    });
    let (s1, s2) = sums.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let m = cfg.samples as f64;
    let mean = s1 / m;
    let var = if cfg.samples > 1 {
        ((s2 - m * mean * mean) / (m - 1.0)).max(0.0)
    } else {
        0.0
    };
    (d.box_volume * mean, d.box_volume * (var / m).sqrt())
}

/// Checks `∫ θ` of one roof.
pub fn integral_oracle(roof: &RoofFunction, cfg: OracleConfig) -> Estimate {
    let fr = FloatRoof::new(roof);
    let (estimate, standard_error) = integrate_mc(roof.domain(), |x| fr.eval(x), cfg);
    Estimate {
        exact: roof.integrate().to_f64(),
        estimate,
        standard_error,
    }
}

/// Checks `ĥ = (n+1)!·Σ_v λ_v ∫ θ_v` with one shared sample set.
pub fn height_oracle(inst: &ToricInstance, cfg: OracleConfig) -> Result<Estimate> {
    let roofs = inst.roofs()?;
    let k = f(&(Q::from(factorial(inst.dim() + 1)) * inst.volume_scale()));
    let parts: Vec<(f64, FloatRoof)> = roofs.iter().map(|(_, l, r)| (k * f(l), FloatRoof::new(r))).collect();
    let (estimate, standard_error) = integrate_mc(
        inst.polytope(),
        |x| parts.iter().map(|(w, r)| w * r.eval(x)).sum(),
        cfg,
    );
    Ok(Estimate {
        exact: crate::invariants::normalized_height(inst)?.to_f64(),
        estimate,
        standard_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::{upper_envelope, WeightedConfig};

    fn tent() -> RoofFunction {
        let w = vec!["0".parse().unwrap(), "log(2)".parse().unwrap(), "0".parse().unwrap()];
        upper_envelope(&WeightedConfig::new(vec![vec![0], vec![1], vec![2]], w).unwrap()).unwrap()
    }

    #[test]
    fn tent_integral_agrees() {
        let e = integral_oracle(&tent(), OracleConfig::default());
        assert!((e.exact - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(e.agrees(), "{e:?}");
        assert!(e.standard_error > 0.0 && e.standard_error < 1e-2);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let cfg = OracleConfig { samples: 10_001, seed: 7 };
        assert_eq!(integral_oracle(&tent(), cfg), integral_oracle(&tent(), cfg));
        let other = integral_oracle(&tent(), OracleConfig { samples: 10_001, seed: 8 });
        assert_ne!(integral_oracle(&tent(), cfg).estimate, other.estimate);
    }

    #[test]
    fn wrong_exact_value_is_caught() {
        let mut e = integral_oracle(&tent(), OracleConfig::default());
        e.exact *= 1.1;
        assert!(!e.agrees());
    }
}

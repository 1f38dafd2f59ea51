//! Degree, Chow weight, normalized height and multiheights of projective
//! toric varieties `X_{A,α}`, and exact intersections with monomial
//! divisors.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{factorial, Q};
use crate::envelope::{mixed_integral, upper_envelope, RoofFunction, WeightedConfig};
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, lattice_data, LatticeData, Polytope};
use crate::logvalue::LogValue;
use crate::places::{
    product_formula_check, rational_log_vectors, weights_from_point, Coordinate, Place,
    PlaceWeights, ProductFormulaReport,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InstanceOptions {
    /// Measure volumes with respect to `L_A` instead of requiring `L_A = Z^n`.
    pub normalized_mode: bool,
    /// Accept weights that violate the product formula.
    pub waive_product_formula: bool,
}

fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from(BigInt::from(x))).collect()
}

fn check_points(points: &[Vec<i64>]) -> Result<usize> {
    let n = points.first().ok_or(Error::Empty("configuration"))?.len();
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.len(),
        });
    }
    Ok(n)
}

/// Checks the lattice hypothesis and returns the factor that turns
/// Lebesgue volume into volume relative to the lattice.
fn lattice_scale(lattice: &LatticeData, options: InstanceOptions) -> Result<Q> {
    if options.normalized_mode && lattice.rank() == lattice.ambient_dim() {
        return Ok(Q::new(BigInt::one(), lattice.saturation_index()));
    }
    lattice.require_full()?;
    Ok(Q::one())
}

fn full_hull(points: &[Vec<i64>]) -> Result<Polytope> {
    let qs: Vec<Vec<Q>> = points.iter().map(|p| to_q(p)).collect();
    let hull = convex_hull(&qs)?;
    if !hull.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            dim: hull.dim(),
            ambient: hull.ambient_dim(),
        });
    }
    Ok(hull)
}

fn gate_product_formula(w: &PlaceWeights, options: InstanceOptions) -> Result<ProductFormulaReport> {
    let report = product_formula_check(w);
    if !options.waive_product_formula {
        report.clone().into_result()?;
    }
    Ok(report)
}

/// `X_{A,α}` given by a configuration and its place weights.
#[derive(Debug, Clone)]
pub struct ToricInstance {
    points: Vec<Vec<i64>>,
    weights: PlaceWeights,
    lattice: LatticeData,
    polytope: Polytope,
    scale: Q,
    options: InstanceOptions,
    product_formula: ProductFormulaReport,
}

impl ToricInstance {
    pub fn new(points: Vec<Vec<i64>>, weights: PlaceWeights, options: InstanceOptions) -> Result<Self> {
        check_points(&points)?;
        if weights.len() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                found: weights.len(),
            });
        }
        let lattice = lattice_data(&points)?;
        let scale = lattice_scale(&lattice, options)?;
        let polytope = full_hull(&points)?;
        let product_formula = gate_product_formula(&weights, options)?;
        Ok(Self {
            points,
            weights,
            lattice,
            polytope,
            scale,
            options,
            product_formula,
        })
    }

    /// Weights derived from the coordinates of `α`.
    pub fn from_point(points: Vec<Vec<i64>>, alpha: &[Coordinate], options: InstanceOptions) -> Result<Self> {
        let weights = weights_from_point(alpha)?;
        Self::new(points, weights, options)
    }

    pub fn dim(&self) -> usize {
        self.polytope.ambient_dim()
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn weights(&self) -> &PlaceWeights {
        &self.weights
    }

    pub fn lattice(&self) -> &LatticeData {
        &self.lattice
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn options(&self) -> InstanceOptions {
        self.options
    }

    pub fn product_formula(&self) -> &ProductFormulaReport {
        &self.product_formula
    }

    /// `1`, or `1/[Z^n : L_A]` in normalized mode.
    pub fn volume_scale(&self) -> &Q {
        &self.scale
    }

    /// The roof `θ_{A,τ}` for an arbitrary weight vector.
    pub fn roof_for(&self, tau: &[LogValue]) -> Result<RoofFunction> {
        upper_envelope(&WeightedConfig::new(self.points.clone(), tau.to_vec())?)
    }

    /// Roofs `θ_{A,τ_v}` for every place carrying nonzero weights.
    pub fn roofs(&self) -> Result<Vec<(Place, Q, RoofFunction)>> {
        self.weights
            .entries()
            .iter()
            .map(|e| Ok((e.place, e.multiplicity.clone(), self.roof_for(&e.tau)?)))
            .collect()
    }
}

/// `n!·Vol_n(Q_A)`, relative to `L_A` in normalized mode.
pub fn degree(inst: &ToricInstance) -> BigInt {
    let d = Q::from(factorial(inst.dim())) * inst.polytope.volume() * &inst.scale;
    assert!(d.is_integer(), "lattice polytope volume times n! is an integer");
    d.to_integer()
}

/// `(n+1)!·∫_{Q_A} θ_{A,τ}` for a saturated configuration.
pub fn chow_weight(points: &[Vec<i64>], tau: &[LogValue]) -> Result<LogValue> {
    check_points(points)?;
    lattice_data(points)?.require_full()?;
    full_hull(points)?;
    let f = upper_envelope(&WeightedConfig::new(points.to_vec(), tau.to_vec())?)?;
    Ok(scaled_chow_weight(&f, &Q::one()))
}

fn scaled_chow_weight(f: &RoofFunction, scale: &Q) -> LogValue {
    let k = Q::from(factorial(f.ambient_dim() + 1)) * scale;
    f.integrate().scale(&k)
}

/// Chow weight of the instance's configuration for the weights `tau`,
/// honoring normalized mode.
pub fn instance_chow_weight(inst: &ToricInstance, tau: &[LogValue]) -> Result<LogValue> {
    Ok(scaled_chow_weight(&inst.roof_for(tau)?, &inst.scale))
}

/// `ĥ(X_{A,α}) = Σ_v λ_v e_{τ_v}(X_A)`.
pub fn normalized_height(inst: &ToricInstance) -> Result<LogValue> {
    let mut h = LogValue::zero();
    for (_, lambda, f) in inst.roofs()? {
        h += &scaled_chow_weight(&f, &inst.scale).scale(&lambda);
    }
    Ok(h)
}

/// One factor `(A_i, τ_i)` of a multiprojective toric variety.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub points: Vec<Vec<i64>>,
    pub weights: PlaceWeights,
}

#[derive(Debug, Clone)]
pub struct MultiInstance {
    n: usize,
    blocks: Vec<Block>,
    c: Vec<usize>,
    lattice: LatticeData,
    scale: Q,
    options: InstanceOptions,
}

impl MultiInstance {
    pub fn new(blocks: Vec<Block>, c: Vec<usize>, options: InstanceOptions) -> Result<Self> {
        let n = check_points(&blocks.first().ok_or(Error::Empty("block list"))?.points)?;
        if c.len() != blocks.len() {
            return Err(Error::invalid(format!(
                "index vector has {} entries for {} blocks",
                c.len(),
                blocks.len()
            )));
        }
        if c.iter().sum::<usize>() != n + 1 {
            return Err(Error::invalid(format!(
                "index entries must sum to n+1 = {}, got {}",
                n + 1,
                c.iter().sum::<usize>()
            )));
        }
        let mut gens = Vec::new();
        let mut lambdas: BTreeMap<Place, Q> = BTreeMap::new();
        for b in &blocks {
            if check_points(&b.points)? != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: b.points[0].len(),
                });
            }
            if b.weights.len() != b.points.len() {
                return Err(Error::DimensionMismatch {
                    expected: b.points.len(),
                    found: b.weights.len(),
                });
            }
            gate_product_formula(&b.weights, options)?;
            for e in b.weights.entries() {
                if let Some(l) = lambdas.insert(e.place, e.multiplicity.clone()) {
                    if l != e.multiplicity {
                        return Err(Error::invalid(format!(
                            "place {} has different multiplicities across blocks",
                            e.place
                        )));
                    }
                }
            }
            let p0 = &b.points[0];
            gens.extend(
                b.points[1..]
                    .iter()
                    .map(|p| p.iter().zip(p0).map(|(x, y)| x - y).collect::<Vec<i64>>()),
            );
        }
        let lattice = LatticeData::from_generators(gens, n)?;
        let scale = lattice_scale(&lattice, options)?;
        Ok(Self {
            n,
            blocks,
            c,
            lattice,
            scale,
            options,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn index_vector(&self) -> &[usize] {
        &self.c
    }

    /// Lattice generated by the differences within each block.
    pub fn lattice(&self) -> &LatticeData {
        &self.lattice
    }

    pub fn options(&self) -> InstanceOptions {
        self.options
    }

    /// Union of the places of all blocks with their multiplicities.
    pub fn places(&self) -> BTreeMap<Place, Q> {
        let mut out = BTreeMap::new();
        for b in &self.blocks {
            for e in b.weights.entries() {
                out.insert(e.place, e.multiplicity.clone());
            }
        }
        out
    }
}

/// `ĥ_c = Σ_v λ_v MI(θ_0 (c_0 times), …, θ_m (c_m times))`.
pub fn normalized_multiheight(inst: &MultiInstance) -> Result<LogValue> {
    Ok(multiheight_terms(inst)?
        .into_iter()
        .map(|(_, lambda, mi)| mi.scale(&lambda))
        .sum())
}

/// Per place: `(v, λ_v, MI_c)`, with normalized mode already applied.
pub fn multiheight_terms(inst: &MultiInstance) -> Result<Vec<(Place, Q, LogValue)>> {
    let mut out = Vec::new();
    for (place, lambda) in inst.places() {
        let mut roofs = Vec::with_capacity(inst.n + 1);
        for (b, &ci) in inst.blocks.iter().zip(&inst.c) {
            if ci == 0 {
                continue;
            }
            let tau = b
                .weights
                .get(place)
                .map_or_else(|| vec![LogValue::zero(); b.points.len()], |e| e.tau.clone());
            let f = upper_envelope(&WeightedConfig::new(b.points.clone(), tau)?)?;
            roofs.extend(std::iter::repeat_n(f, ci));
        }
        out.push((place, lambda, mixed_integral(&roofs)?.scale(&inst.scale)));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BezoutCell {
    pub vertices: Vec<Vec<Q>>,
    /// Indices of the lifted points on this piece of the roof.
    pub support: Vec<usize>,
    pub volume: Q,
    /// `⟨g_S, a⟩ + D·c_S` for the cell's affine function `⟨g_S, x⟩ + c_S`:
    /// its extension to `Q^n` at `a` made homogeneous of degree `D`, so
    /// that the intersection is linear in `b`. Equals `θ_S(a)` when `D = 1`.
    pub value_at_a: LogValue,
    /// `[L_{A∩S} : L_A]`, reported only.
    pub lattice_index: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BezoutPlace {
    pub place: Place,
    pub multiplicity: Q,
    pub cells: Vec<BezoutCell>,
    /// `Σ_S θ_S(a)·Vol_n(S)`.
    pub sum: LogValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BezoutReport {
    /// `ĥ(X·div(x^b))`.
    pub height: LogValue,
    /// `ĥ(X)`.
    pub base_height: LogValue,
    /// `D = Σ_{j=0}^{N} b_j`.
    pub d: BigInt,
    /// `a = Σ_i b_i a_i`.
    pub a: Vec<BigInt>,
    pub places: Vec<BezoutPlace>,
    /// For `b ≥ 0`, whether `ĥ(X·div(x^b)) ≤ D·ĥ(X)`.
    pub effective_bound: Option<bool>,
}

pub fn monomial_bezout(inst: &ToricInstance, b: &[i64]) -> Result<BezoutReport> {
    let n = inst.dim();
    if b.len() != inst.points.len() {
        return Err(Error::DimensionMismatch {
            expected: inst.points.len(),
            found: b.len(),
        });
    }
    let d: BigInt = b.iter().map(|&x| BigInt::from(x)).sum();
    let a: Vec<BigInt> = (0..n)
        .map(|k| {
            b.iter()
                .zip(&inst.points)
                .map(|(&bi, p)| BigInt::from(bi) * p[k])
                .sum()
        })
        .collect();
    let a_q: Vec<Q> = a.iter().cloned().map(Q::from).collect();
    let d_q = Q::from(d.clone());
    let base_index = inst.lattice.saturation_index();
    let qpoints: Vec<Vec<Q>> = inst.points.iter().map(|p| to_q(p)).collect();

    let base_height = normalized_height(inst)?;
    let mut places = Vec::new();
    let mut correction = LogValue::zero();
    for (place, lambda, f) in inst.roofs()? {
        let mut cells = Vec::new();
        let mut sum = LogValue::zero();
        for cell in f.cells() {
            let volume = cell.volume() * &inst.scale;
            let affine = cell.affine();
            let mut value_at_a = affine.constant().scale(&d_q);
            for (g, ak) in affine.gradient().iter().zip(&a_q) {
                value_at_a += &g.scale(ak);
            }
            sum += &value_at_a.scale(&volume);
            let in_cell: Vec<Vec<i64>> = qpoints
                .iter()
                .zip(&inst.points)
                .filter(|(x, _)| cell.polytope().contains(x))
                .map(|(_, p)| p.clone())
                .collect();
            let sub = lattice_data(&in_cell)?.saturation_index();
            cells.push(BezoutCell {
                vertices: cell.polytope().vertices().to_vec(),
                support: cell.support().to_vec(),
                volume,
                value_at_a,
                lattice_index: sub / &base_index,
            });
        }
        correction += &sum.scale(&lambda);
        places.push(BezoutPlace {
            place,
            multiplicity: lambda,
            cells,
            sum,
        });
    }
    let height = base_height.scale(&d_q) - correction.scale(&Q::from(factorial(n)));
    let effective_bound = if b.iter().all(|&x| x >= 0) {
        Some(height.compare(&base_height.scale(&d_q))? != std::cmp::Ordering::Greater)
    } else {
        None
    };
    Ok(BezoutReport {
        height,
        base_height,
        d,
        a,
        places,
        effective_bound,
    })
}

/// Weil height of the orbit point `t *_A α = (t^{a_i} α_i)_i`.
pub fn orbit_point_height(inst: &ToricInstance, t: &[Q]) -> Result<LogValue> {
    if t.len() != inst.dim() {
        return Err(Error::DimensionMismatch {
            expected: inst.dim(),
            found: t.len(),
        });
    }
    let sigma = rational_log_vectors(t)?;
    let places: BTreeSet<Place> = inst
        .weights
        .places()
        .into_iter()
        .chain(sigma.keys().copied())
        .collect();
    let mut h = LogValue::zero();
    for place in places {
        let entry = inst.weights.get(place);
        let lambda = entry.map_or_else(Q::one, |e| e.multiplicity.clone());
        let mut values = Vec::with_capacity(inst.points.len());
        for (i, a) in inst.points.iter().enumerate() {
            let mut v = entry.map_or_else(LogValue::zero, |e| e.tau[i].clone());
            if let Some(s) = sigma.get(&place) {
                for (&ak, sk) in a.iter().zip(s) {
                    if ak != 0 {
                        v += &sk.scale(&Q::from(BigInt::from(ak)));
                    }
                }
            }
            values.push(v);
        }
        h += &LogValue::max_of(&values)?.scale(&lambda);
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimaReport {
    pub height: LogValue,
    pub degree: BigInt,
    /// `ĥ(X)/deg(X)`.
    pub height_per_degree: LogValue,
    pub samples: Vec<(Vec<Q>, LogValue)>,
    pub minimum: Option<LogValue>,
    /// `ĥ/((n+1)·deg)`: by the successive minima theorem
    /// `μ̂_1 ≥ reference ≥ μ̂_{n+1}`. Display only.
    pub reference: LogValue,
}

pub fn minima_report(inst: &ToricInstance, samples: &[Vec<Q>]) -> Result<MinimaReport> {
    let height = normalized_height(inst)?;
    let degree = degree(inst);
    let deg_q = Q::from(degree.clone());
    let height_per_degree = height.div_rational(&deg_q);
    let reference = height_per_degree.div_rational(&Q::from(BigInt::from(inst.dim() + 1)));
    let samples = samples
        .iter()
        .map(|t| Ok((t.clone(), orbit_point_height(inst, t)?)))
        .collect::<Result<Vec<_>>>()?;
    let minimum = if samples.is_empty() {
        None
    } else {
        Some(LogValue::min_of(samples.iter().map(|s| &s.1))?)
    };
    Ok(MinimaReport {
        height,
        degree,
        height_per_degree,
        samples,
        minimum,
        reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, q_frac};
    use crate::places::PlaceEntry;

    fn lv(s: &str) -> LogValue {
        s.parse().unwrap()
    }

    fn pts(v: &[&[i64]]) -> Vec<Vec<i64>> {
        v.iter().map(|p| p.to_vec()).collect()
    }

    fn rational(v: &[Q]) -> Vec<Coordinate> {
        v.iter().cloned().map(Coordinate::rational).collect()
    }

    fn inst(a: &[&[i64]], alpha: &[Q]) -> ToricInstance {
        ToricInstance::from_point(pts(a), &rational(alpha), InstanceOptions::default()).unwrap()
    }

    fn conic() -> ToricInstance {
        inst(&[&[0], &[1], &[2]], &[q(1), q(2), q(1)])
    }

    #[test]
    fn degrees() {
        let simplex = inst(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &vec![q(1); 4]);
        assert_eq!(degree(&simplex), BigInt::from(1));
        assert_eq!(degree(&conic()), BigInt::from(2));
        let square = inst(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]], &vec![q(1); 4]);
        assert_eq!(degree(&square), BigInt::from(2));
    }

    #[test]
    fn lattice_hypothesis() {
        let err = ToricInstance::from_point(pts(&[&[0], &[2]]), &rational(&[q(1), q(1)]), InstanceOptions::default())
            .unwrap_err();
        assert!(matches!(err, Error::LatticeNotSaturated { ref index, .. } if index == "2"));
        assert!(err.to_string().contains("index 2"));
        let opts = InstanceOptions {
            normalized_mode: true,
            ..Default::default()
        };
        let i = ToricInstance::from_point(pts(&[&[0], &[2], &[4]]), &rational(&[q(1), q(2), q(1)]), opts).unwrap();
        // volume 4 measured in a lattice of index 2
        assert_eq!(degree(&i), BigInt::from(2));
        assert_eq!(normalized_height(&i).unwrap(), lv("2*log(2)"));
        let flat = ToricInstance::from_point(pts(&[&[0, 0], &[1, 1]]), &rational(&[q(1), q(1)]), opts);
        assert!(flat.is_err());
    }

    #[test]
    fn chow_weights() {
        let a = pts(&[&[0], &[1], &[2]]);
        assert_eq!(chow_weight(&a, &[lv("0"), lv("0"), lv("0")]).unwrap(), LogValue::zero());
        assert_eq!(chow_weight(&a, &[lv("0"), lv("log(2)"), lv("0")]).unwrap(), lv("2*log(2)"));
        // τ = c·(1,…,1) gives (n+1)·c·deg
        let sq = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let c = lv("1/2*log(3)");
        assert_eq!(chow_weight(&sq, &vec![c.clone(); 4]).unwrap(), c.scale(&q(3 * 2)));
        assert!(chow_weight(&pts(&[&[0], &[2]]), &[lv("0"), lv("0")]).is_err());
    }

    #[test]
    fn heights() {
        assert_eq!(normalized_height(&conic()).unwrap(), lv("2*log(2)"));
        assert_eq!(normalized_height(&inst(&[&[0], &[1]], &[q(1), q(2)])).unwrap(), LogValue::zero());
        let torsion = inst(&[&[0], &[1], &[2]], &[q(1), q(-1), q(1)]);
        assert!(torsion.weights().is_trivial());
        assert_eq!(normalized_height(&torsion).unwrap(), LogValue::zero());
    }

    #[test]
    fn product_formula_gate() {
        let w = PlaceWeights::new(
            2,
            vec![PlaceEntry {
                place: Place::Infinite,
                multiplicity: q(1),
                tau: vec![lv("0"), lv("log(2)")],
            }],
        )
        .unwrap();
        assert!(matches!(
            ToricInstance::new(pts(&[&[0], &[1]]), w.clone(), InstanceOptions::default()),
            Err(Error::ProductFormula { index: 1, .. })
        ));
        let opts = InstanceOptions {
            waive_product_formula: true,
            ..Default::default()
        };
        let i = ToricInstance::new(pts(&[&[0], &[1]]), w, opts).unwrap();
        assert!(!i.product_formula().passed);
        assert_eq!(normalized_height(&i).unwrap(), lv("log(2)"));
    }

    #[test]
    fn multiheights() {
        let conic_block = Block {
            points: conic().points().to_vec(),
            weights: conic().weights().clone(),
        };
        let m = MultiInstance::new(vec![conic_block.clone()], vec![2], InstanceOptions::default()).unwrap();
        assert_eq!(normalized_multiheight(&m).unwrap(), normalized_height(&conic()).unwrap());

        let line = |alpha: &[Q]| Block {
            points: pts(&[&[0], &[1]]),
            weights: weights_from_point(&rational(alpha)).unwrap(),
        };
        // The zero roof on a segment is not neutral for ⊞, so this is not
        // zero. Oracle: the Segre image (1 : t : 2t : 2t^2) has height
        // h_(2,0) + 2 h_(1,1) + h_(0,2) = 2 log 2 with h_(2,0) = h_(0,2) = 0.
        let m = MultiInstance::new(vec![line(&[q(1), q(2)]), line(&[q(1), q(1)])], vec![1, 1], InstanceOptions::default())
            .unwrap();
        let segre = inst(&[&[0], &[1], &[1], &[2]], &[q(1), q(1), q(2), q(2)]);
        assert_eq!(normalized_height(&segre).unwrap(), lv("2*log(2)"));
        assert_eq!(normalized_multiheight(&m).unwrap(), lv("log(2)"));

        let m = MultiInstance::new(vec![line(&[q(1), q(-1)]), line(&[q(-1), q(1)])], vec![1, 1], InstanceOptions::default())
            .unwrap();
        assert_eq!(normalized_multiheight(&m).unwrap(), LogValue::zero());

        assert!(MultiInstance::new(vec![conic_block.clone()], vec![1], InstanceOptions::default()).is_err());
        assert!(MultiInstance::new(vec![conic_block], vec![1, 1], InstanceOptions::default()).is_err());
    }

    #[test]
    fn multiheight_of_two_lines() {
        // P^1 x P^1 style: points (1:2) and (1:3) on two copies of the line
        let line = |alpha: &[Q]| Block {
            points: pts(&[&[0], &[1]]),
            weights: weights_from_point(&rational(alpha)).unwrap(),
        };
        let m = MultiInstance::new(vec![line(&[q(1), q(2)]), line(&[q(1), q(3)])], vec![1, 1], InstanceOptions::default())
            .unwrap();
        // linear roofs x·log 2 and x·log 3 at infinity give MI = log 3
        assert_eq!(normalized_multiheight(&m).unwrap(), lv("log(3)"));
    }

    #[test]
    fn bezout_examples() {
        let r = monomial_bezout(&conic(), &[0, 0, 0]).unwrap();
        assert_eq!(r.height, LogValue::zero());
        assert_eq!(r.d, BigInt::from(0));

        let line = inst(&[&[0], &[1]], &[q(1), q(2)]);
        let r = monomial_bezout(&line, &[0, 1]).unwrap();
        assert_eq!((r.height.clone(), r.d.clone(), r.a.clone()), (LogValue::zero(), BigInt::from(1), vec![BigInt::from(1)]));
        let sums: Vec<LogValue> = r.places.iter().map(|p| p.sum.clone()).collect();
        assert_eq!(sums.iter().cloned().sum::<LogValue>(), LogValue::zero());
        assert_eq!(r.effective_bound, Some(true));

        let r = monomial_bezout(&conic(), &[1, 0, 0]).unwrap();
        assert_eq!(r.height, LogValue::zero());
        assert_eq!((r.d.clone(), r.a.clone()), (BigInt::from(1), vec![BigInt::from(0)]));
        let inf = r.places.iter().find(|p| p.place == Place::Infinite).unwrap();
        let mut vals: Vec<(Vec<Vec<Q>>, LogValue, Q)> = inf
            .cells
            .iter()
            .map(|c| (c.vertices.clone(), c.value_at_a.clone(), c.volume.clone()))
            .collect();
        vals.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(vals[0].1, LogValue::zero());
        assert_eq!(vals[1].1, lv("2*log(2)"));
        assert!(vals.iter().all(|v| v.2 == q(1)));
        assert!(inf.cells.iter().all(|c| c.lattice_index == BigInt::from(1)));
        assert_eq!(inf.sum, lv("2*log(2)"));

        // X·div(x_0^2) = 2·X·div(x_0)
        let r = monomial_bezout(&conic(), &[2, 0, 0]).unwrap();
        assert_eq!(r.height, LogValue::zero());
        assert_eq!(r.effective_bound, Some(true));

        // negative entries are allowed, without the effective bound
        let r = monomial_bezout(&conic(), &[1, -1, 1]).unwrap();
        assert_eq!(r.effective_bound, None);
        assert!(monomial_bezout(&conic(), &[1, 0]).is_err());
    }

    #[test]
    fn bezout_reports_sublattice_indices() {
        // cells [0,2] and [2,3] of A = (0,2,3): A∩[0,2] = {0,2} has index 2
        let i = inst(&[&[0], &[2], &[3]], &[q(1), q(4), q(1)]);
        let r = monomial_bezout(&i, &[1, 0, 0]).unwrap();
        let inf = r.places.iter().find(|p| p.place == Place::Infinite).unwrap();
        let mut idx: Vec<BigInt> = inf.cells.iter().map(|c| c.lattice_index.clone()).collect();
        idx.sort();
        assert_eq!(idx, vec![BigInt::from(1), BigInt::from(2)]);

        // t ↦ (1 : 4t^2 : t^3) meets x_0 = 0 and x_2 = 0 each in a triple
        // point of height zero; the index must not multiply θ_S(a)
        assert_eq!(r.height, LogValue::zero());
        let r = monomial_bezout(&i, &[0, 0, 1]).unwrap();
        assert_eq!(r.height, LogValue::zero());
    }

    #[test]
    fn orbit_heights() {
        assert_eq!(orbit_point_height(&conic(), &[q(1)]).unwrap(), lv("log(2)"));
        // t = 2: (1 : 4 : 4) has height log 4
        assert_eq!(orbit_point_height(&conic(), &[q(2)]).unwrap(), lv("2*log(2)"));
        // t = 1/2: (1 : 1 : 1/4) ~ (4 : 4 : 1)
        assert_eq!(orbit_point_height(&conic(), &[q_frac(1, 2)]).unwrap(), lv("2*log(2)"));
        let torsion = inst(&[&[0], &[1], &[2]], &[q(1), q(-1), q(1)]);
        assert_eq!(orbit_point_height(&torsion, &[q(1)]).unwrap(), LogValue::zero());
        assert!(matches!(orbit_point_height(&conic(), &[q(0)]), Err(Error::ZeroCoordinate { .. })));
    }

    #[test]
    fn minima() {
        let samples = vec![vec![q(1)], vec![q(2)], vec![q_frac(1, 2)]];
        let r = minima_report(&conic(), &samples).unwrap();
        assert_eq!(r.height_per_degree, lv("log(2)"));
        assert_eq!(r.samples.len(), 3);
        assert_eq!(r.minimum, Some(lv("log(2)")));
        assert_eq!(r.reference, lv("1/2*log(2)"));
        let empty = minima_report(&conic(), &[]).unwrap();
        assert!(empty.samples.is_empty() && empty.minimum.is_none());
        let torsion = inst(&[&[0], &[1], &[2]], &[q(1), q(-1), q(1)]);
        let r = minima_report(&torsion, &samples[..1]).unwrap();
        assert_eq!(r.height_per_degree, LogValue::zero());
        assert_eq!(r.samples[0].1, LogValue::zero());
    }
}

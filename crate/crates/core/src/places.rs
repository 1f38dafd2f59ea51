//! Places of `Q` and the weight vectors `τ_v = (log|α_i|_v)_i`.
//!
//! Coordinates have the form `q·r^e` with a single radical base `r` shared
//! by the whole point. All places of `Q(r^e)` above a rational place then
//! give the same absolute value, so every rational place appears once with
//! multiplicity 1.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::{format_rational, valuations, Q};
use crate::error::{Error, Result};
use crate::logvalue::LogValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Place::Infinite),
            t => {
                let p: u64 = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad place {t:?}")))?;
                if !crate::arith::is_prime(p) {
                    return Err(Error::Parse(format!("place {p} is not prime")));
                }
                Ok(Place::Finite(p))
            }
        }
    }
}

/// The algebraic number `q·r^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinate {
    q: Q,
    base: Q,
    exponent: Q,
}

impl Coordinate {
    pub fn new(q: Q, base: Q, exponent: Q) -> Result<Self> {
        if !base.is_positive() {
            return Err(Error::invalid(format!(
                "radical base must be positive, got {}",
                format_rational(&base)
            )));
        }
        Ok(Self { q, base, exponent })
    }

    pub fn rational(q: Q) -> Self {
        Self {
            q,
            base: Q::one(),
            exponent: Q::zero(),
        }
    }

    pub fn q(&self) -> &Q {
        &self.q
    }

    pub fn base(&self) -> &Q {
        &self.base
    }

    pub fn exponent(&self) -> &Q {
        &self.exponent
    }

    pub fn is_rational(&self) -> bool {
        self.base.is_one() || self.exponent.is_zero()
    }

    /// `v_p(q) + e·v_p(r)` for every prime with a nonzero value.
    fn log_valuations(&self) -> Result<BTreeMap<u64, Q>> {
        let mut out: BTreeMap<u64, Q> = BTreeMap::new();
        for (p, v) in valuations(&self.q)? {
            *out.entry(p).or_insert_with(Q::zero) += Q::from_integer(v.into());
        }
        if !self.is_rational() {
            for (p, v) in valuations(&self.base)? {
                *out.entry(p).or_insert_with(Q::zero) += &self.exponent * Q::from_integer(v.into());
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceEntry {
    pub place: Place,
    /// `[K_v : Q_v] / [K : Q]`.
    pub multiplicity: Q,
    pub tau: Vec<LogValue>,
}

/// Per-place weight vectors of one point. Places with a zero vector are
/// dropped, so torsion points have no entries at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceWeights {
    len: usize,
    entries: Vec<PlaceEntry>,
}

impl PlaceWeights {
    pub fn new(len: usize, entries: Vec<PlaceEntry>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for e in &entries {
            if !seen.insert(e.place) {
                return Err(Error::invalid(format!("place {} listed twice", e.place)));
            }
            if e.tau.len() != len {
                return Err(Error::DimensionMismatch {
                    expected: len,
                    found: e.tau.len(),
                });
            }
            if !e.multiplicity.is_positive() {
                return Err(Error::invalid(format!(
                    "multiplicity of place {} must be positive",
                    e.place
                )));
            }
        }
        let mut entries: Vec<PlaceEntry> = entries
            .into_iter()
            .filter(|e| e.tau.iter().any(|t| !t.is_zero()))
            .collect();
        entries.sort_by_key(|e| e.place);
        Ok(Self { len, entries })
    }

    /// No places: every weight is zero.
    pub fn trivial(len: usize) -> Self {
        Self {
            len,
            entries: Vec::new(),
        }
    }

    /// Number of coordinates.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn entries(&self) -> &[PlaceEntry] {
        &self.entries
    }

    pub fn is_trivial(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, place: Place) -> Option<&PlaceEntry> {
        self.entries.iter().find(|e| e.place == place)
    }

    pub fn places(&self) -> Vec<Place> {
        self.entries.iter().map(|e| e.place).collect()
    }
}

pub fn weights_from_point(coords: &[Coordinate]) -> Result<PlaceWeights> {
    let mut base: Option<&Q> = None;
    for (i, c) in coords.iter().enumerate() {
        if c.q.is_zero() {
            return Err(Error::ZeroCoordinate { index: i });
        }
        if c.is_rational() {
            continue;
        }
        match base {
            Some(b) if b != &c.base => {
                return Err(Error::MixedRadicalBases {
                    first: format_rational(b),
                    second: format_rational(&c.base),
                })
            }
            _ => base = Some(&c.base),
        }
    }

    let vals = coords
        .iter()
        .map(Coordinate::log_valuations)
        .collect::<Result<Vec<_>>>()?;
    let primes: BTreeSet<u64> = vals.iter().flat_map(|v| v.keys().copied()).collect();
    let mut entries = Vec::with_capacity(primes.len() + 1);
    for &p in &primes {
        let tau = vals
            .iter()
            .map(|v| match v.get(&p) {
                Some(k) => LogValue::from_terms([(p, -k.clone())]),
                None => Ok(LogValue::zero()),
            })
            .collect::<Result<Vec<_>>>()?;
        entries.push(PlaceEntry {
            place: Place::Finite(p),
            multiplicity: Q::one(),
            tau,
        });
    }
    let tau_inf = vals
        .iter()
        .map(|v| LogValue::from_terms(v.iter().map(|(&p, k)| (p, k.clone()))))
        .collect::<Result<Vec<_>>>()?;
    entries.push(PlaceEntry {
        place: Place::Infinite,
        multiplicity: Q::one(),
        tau: tau_inf,
    });
    PlaceWeights::new(coords.len(), entries)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductFormulaReport {
    /// `Σ_v λ_v τ_{i,v}` for each coordinate `i`.
    pub sums: Vec<LogValue>,
    pub passed: bool,
}

impl ProductFormulaReport {
    /// The first failing coordinate as an error.
    pub fn into_result(self) -> Result<()> {
        match self.sums.iter().position(|s| !s.is_zero()) {
            None => Ok(()),
            Some(i) => Err(Error::ProductFormula {
                index: i,
                sum: self.sums[i].to_string(),
            }),
        }
    }
}

pub fn product_formula_check(w: &PlaceWeights) -> ProductFormulaReport {
    let mut sums = vec![LogValue::zero(); w.len()];
    for e in &w.entries {
        for (s, t) in sums.iter_mut().zip(&e.tau) {
            *s += &t.scale(&e.multiplicity);
        }
    }
    let passed = sums.iter().all(LogValue::is_zero);
    ProductFormulaReport { sums, passed }
}

/// `Σ_v λ_v max_i τ_{i,v}`, the absolute logarithmic Weil height of the
/// projective point with these weights.
pub fn weil_height(w: &PlaceWeights) -> Result<LogValue> {
    let mut h = LogValue::zero();
    for e in &w.entries {
        h += &LogValue::max_of(&e.tau)?.scale(&e.multiplicity);
    }
    Ok(h)
}

/// Log-vectors `(log|t_k|_v)_k` of a rational vector, one per place.
pub fn rational_log_vectors(t: &[Q]) -> Result<BTreeMap<Place, Vec<LogValue>>> {
    let coords: Vec<Coordinate> = t.iter().cloned().map(Coordinate::rational).collect();
    let w = weights_from_point(&coords)?;
    Ok(w.entries.into_iter().map(|e| (e.place, e.tau)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, q_frac};
    use proptest::prelude::*;

    fn lv(s: &str) -> LogValue {
        s.parse().unwrap()
    }

    fn rational_point(v: &[Q]) -> PlaceWeights {
        let c: Vec<Coordinate> = v.iter().cloned().map(Coordinate::rational).collect();
        weights_from_point(&c).unwrap()
    }

    #[test]
    fn point_one_two_one() {
        let w = rational_point(&[q(1), q(2), q(1)]);
        assert_eq!(w.places(), vec![Place::Finite(2), Place::Infinite]);
        assert_eq!(w.get(Place::Finite(2)).unwrap().tau, vec![lv("0"), lv("-log(2)"), lv("0")]);
        assert_eq!(w.get(Place::Infinite).unwrap().tau, vec![lv("0"), lv("log(2)"), lv("0")]);
        let r = product_formula_check(&w);
        assert!(r.passed);
        assert_eq!(r.sums, vec![LogValue::zero(); 3]);
        assert_eq!(weil_height(&w).unwrap(), lv("log(2)"));
    }

    #[test]
    fn torsion_point_has_no_places() {
        let w = rational_point(&[q(1), q(-1)]);
        assert!(w.is_trivial());
        assert_eq!(weil_height(&w).unwrap(), LogValue::zero());
    }

    #[test]
    fn one_third() {
        let w = rational_point(&[q_frac(1, 3), q(1)]);
        assert_eq!(w.get(Place::Finite(3)).unwrap().tau, vec![lv("log(3)"), lv("0")]);
        assert_eq!(w.get(Place::Infinite).unwrap().tau, vec![lv("-log(3)"), lv("0")]);
    }

    #[test]
    fn hand_weights_fail_the_product_formula() {
        let w = PlaceWeights::new(
            2,
            vec![PlaceEntry {
                place: Place::Infinite,
                multiplicity: q(1),
                tau: vec![lv("0"), lv("log(2)")],
            }],
        )
        .unwrap();
        let r = product_formula_check(&w);
        assert!(!r.passed);
        assert_eq!(r.sums, vec![lv("0"), lv("log(2)")]);
        assert!(matches!(r.into_result(), Err(Error::ProductFormula { index: 1, .. })));
    }

    #[test]
    fn cube_root_of_two() {
        let c = vec![
            Coordinate::rational(q_frac(1, 3)),
            Coordinate::rational(q(5)),
            Coordinate::new(q(1), q(2), q_frac(1, 3)).unwrap(),
        ];
        let w = weights_from_point(&c).unwrap();
        assert!(product_formula_check(&w).passed);
        assert_eq!(w.get(Place::Finite(2)).unwrap().tau[2], lv("-1/3*log(2)"));
        assert_eq!(w.get(Place::Infinite).unwrap().tau[2], lv("1/3*log(2)"));
    }

    #[test]
    fn errors() {
        let zero = [Coordinate::rational(q(1)), Coordinate::rational(q(0))];
        assert_eq!(weights_from_point(&zero), Err(Error::ZeroCoordinate { index: 1 }));
        let mixed = [
            Coordinate::new(q(1), q(2), q_frac(1, 2)).unwrap(),
            Coordinate::new(q(1), q(3), q_frac(1, 2)).unwrap(),
        ];
        assert!(matches!(weights_from_point(&mixed), Err(Error::MixedRadicalBases { .. })));
        assert!(Coordinate::new(q(1), q(-2), q(1)).is_err());
        let dup = PlaceEntry {
            place: Place::Finite(2),
            multiplicity: q(1),
            tau: vec![lv("log(2)")],
        };
        assert!(PlaceWeights::new(1, vec![dup.clone(), dup]).is_err());
    }

    #[test]
    fn place_syntax() {
        assert_eq!("inf".parse::<Place>().unwrap(), Place::Infinite);
        assert_eq!("7".parse::<Place>().unwrap(), Place::Finite(7));
        assert!("8".parse::<Place>().is_err());
        assert_eq!(Place::Finite(7).to_string(), "7");
    }

    fn small_rational() -> impl Strategy<Value = Q> {
        (1i64..=50, 1i64..=50, any::<bool>()).prop_map(|(n, d, neg)| {
            let x = q_frac(n, d);
            if neg {
                -x
            } else {
                x
            }
        })
    }

    proptest! {
        #[test]
        fn derived_weights_satisfy_the_product_formula(
            v in prop::collection::vec(small_rational(), 1..8),
        ) {
            prop_assert!(product_formula_check(&rational_point(&v)).passed);
        }

        #[test]
        fn integer_radical_exponents_agree_with_rationals(
            qs in prop::collection::vec(small_rational(), 1..6),
            ks in prop::collection::vec(-3i64..=3, 6),
            l in 1i64..=4,
        ) {
            // q·2^{(k·l)/l} is the rational q·2^k
            let radical: Vec<Coordinate> = qs
                .iter()
                .zip(&ks)
                .map(|(x, &k)| Coordinate::new(x.clone(), q(2), q_frac(k * l, l)).unwrap())
                .collect();
            let rational: Vec<Q> = qs
                .iter()
                .zip(&ks)
                .map(|(x, &k)| x * q(2).pow(k as i32))
                .collect();
            prop_assert_eq!(weights_from_point(&radical).unwrap(), rational_point(&rational));
        }

        #[test]
        fn common_scaling_shifts_each_place_uniformly(
            v in prop::collection::vec(small_rational(), 2..6),
            s in small_rational(),
        ) {
            let w = rational_point(&v);
            let scaled: Vec<Q> = v.iter().map(|x| x * &s).collect();
            let ws = rational_point(&scaled);
            let shift = rational_log_vectors(std::slice::from_ref(&s)).unwrap();
            let places: BTreeSet<Place> = w.places().into_iter().chain(ws.places()).chain(shift.keys().copied()).collect();
            for p in places {
                let zero = vec![LogValue::zero(); v.len()];
                let a = w.get(p).map_or(&zero, |e| &e.tau);
                let b = ws.get(p).map_or(&zero, |e| &e.tau);
                let c = shift.get(&p).map_or(LogValue::zero(), |t| t[0].clone());
                for (x, y) in a.iter().zip(b) {
                    prop_assert_eq!(y - x, c.clone());
                }
            }
            prop_assert_eq!(weil_height(&w).unwrap(), weil_height(&ws).unwrap());
        }
    }
}

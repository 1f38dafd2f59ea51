//! Sublattices of `Z^n` generated by point differences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeData {
    ambient: usize,
    generators: Vec<Vec<i64>>,
    invariant_factors: Vec<BigInt>,
}

impl LatticeData {
    pub fn from_generators(generators: Vec<Vec<i64>>, ambient: usize) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != ambient) {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                found: g.len(),
            });
        }
        let invariant_factors = smith_diagonal(&generators, ambient);
        Ok(Self {
            ambient,
            generators,
            invariant_factors,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Nonzero Smith invariants `d_1 | d_2 | ...` of the generator matrix.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    /// Index of the lattice in its saturation `(L ⊗ Q) ∩ Z^n`.
    pub fn saturation_index(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Index in `Z^n`; `None` (infinite) when the rank is below `n`.
    pub fn index(&self) -> Option<BigInt> {
        (self.rank() == self.ambient).then(|| self.saturation_index())
    }

    /// Whether the lattice is all of `Z^n`.
    pub fn is_full(&self) -> bool {
        self.index().is_some_and(|i| i.is_one())
    }

    pub(crate) fn require_full(&self) -> Result<()> {
        if self.is_full() {
            return Ok(());
        }
        Err(Error::LatticeNotSaturated {
            rank: self.rank(),
            index: self.saturation_index().to_string(),
            ambient: self.ambient,
        })
    }
}

/// Lattice generated by the differences `a_i - a_0`.
pub fn lattice_data(points: &[Vec<i64>]) -> Result<LatticeData> {
    let first = points.first().ok_or(Error::Empty("point list"))?;
    let n = first.len();
    let mut gens = Vec::with_capacity(points.len().saturating_sub(1));
    for p in &points[1..] {
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
        gens.push(p.iter().zip(first).map(|(x, y)| x - y).collect());
    }
    LatticeData::from_generators(gens, n)
}

/// Diagonalizes by unimodular row and column operations, then normalizes
/// the diagonal into divisibility order with gcd/lcm exchanges.
fn smith_diagonal(rows: &[Vec<i64>], cols: usize) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let m = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(cols) {
        let Some((pi, pj)) = min_entry(&a, t, t) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let piv = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                let f = &a[i][t] / &piv;
                if !f.is_zero() {
                    for j in t..cols {
                        let s = &f * &a[t][j];
                        a[i][j] -= s;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let f = &a[t][j] / &piv;
                if !f.is_zero() {
                    for row in a.iter_mut().skip(t) {
                        let s = &f * &row[t];
                        row[j] -= s;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if clean {
                break;
            }
            // A nonzero remainder is smaller than the pivot: move it in.
            let mut best = (t, t);
            for i in t + 1..m {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

fn min_entry(a: &[Vec<BigInt>], r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(r0) {
        for (j, x) in row.iter().enumerate().skip(c0) {
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn simplex_vertices_generate_everything() {
        let l = lattice_data(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(l.rank(), 3);
        assert_eq!(l.index(), Some(BigInt::one()));
        assert!(l.is_full());
    }

    #[test]
    fn even_points_have_index_two() {
        let l = lattice_data(&[vec![0], vec![2], vec![4]]).unwrap();
        assert_eq!(l.rank(), 1);
        assert_eq!(l.index(), Some(BigInt::from(2)));
        assert!(!l.is_full());
    }

    #[test]
    fn rotated_square_lattice() {
        let l = LatticeData::from_generators(vec![vec![1, 1], vec![1, -1]], 2).unwrap();
        assert_eq!(l.rank(), 2);
        assert_eq!(l.index(), Some(BigInt::from(2)));
        assert_eq!(l.invariant_factors(), &[BigInt::from(1), BigInt::from(2)]);
    }

    #[test]
    fn rank_deficient_lattice() {
        let l = lattice_data(&[vec![0, 0], vec![2, 2], vec![4, 4]]).unwrap();
        assert_eq!(l.rank(), 1);
        assert_eq!(l.index(), None);
        assert_eq!(l.saturation_index(), BigInt::from(2));
        assert!(matches!(l.require_full(), Err(Error::LatticeNotSaturated { rank: 1, .. })));
    }

    #[test]
    fn divisibility_normalization() {
        let l = LatticeData::from_generators(vec![vec![2, 0], vec![0, 3]], 2).unwrap();
        assert_eq!(l.invariant_factors(), &[BigInt::from(1), BigInt::from(6)]);
    }

    proptest! {
        #[test]
        fn index_is_invariant_under_permutation_and_translation(
            pts in prop::collection::vec(prop::collection::vec(-4i64..5, 2), 1..6),
            shift in prop::collection::vec(-5i64..6, 2),
            rot in 0usize..6,
        ) {
            let base = lattice_data(&pts).unwrap();
            let mut permuted = pts.clone();
            let k = rot % permuted.len();
            permuted.rotate_left(k);
            permuted.reverse();
            let moved: Vec<Vec<i64>> = permuted
                .iter()
                .map(|p| p.iter().zip(&shift).map(|(x, s)| x + s).collect())
                .collect();
            let other = lattice_data(&moved).unwrap();
            prop_assert_eq!(base.rank(), other.rank());
            prop_assert_eq!(base.invariant_factors(), other.invariant_factors());
        }
    }
}

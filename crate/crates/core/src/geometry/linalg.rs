//! Dense linear algebra over the rationals at desk scale.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::Q;

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    if a.iter().chain(b).all(|x| x.denom().is_one()) {
        let mut acc = BigInt::zero();
        for (x, y) in a.iter().zip(b) {
            acc += x.numer() * y.numer();
        }
        return Q::from_integer(acc);
    }
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Q], k: &Q) -> Vec<Q> {
    a.iter().map(|x| x * k).collect()
}

pub fn neg(a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[Q]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// `primitive(a + k·b)`.
pub fn primitive_add(a: &[Q], b: &[Q], k: &Q) -> Vec<Q> {
    let v: Vec<Q> = a.iter().zip(b).map(|(x, y)| x + k * y).collect();
    crate::arith::primitive(&v)
}

/// Incrementally built row space with a reduced echelon basis, plus the
/// original vectors that were accepted as independent.
#[derive(Debug, Clone, Default)]
pub struct Span {
    echelon: Vec<(usize, Vec<Q>)>,
    accepted: Vec<Vec<Q>>,
}

impl Span {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    /// The accepted independent input vectors, in insertion order.
    pub fn basis(&self) -> &[Vec<Q>] {
        &self.accepted
    }

    fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut r = v.to_vec();
        for (pivot, row) in &self.echelon {
            if !r[*pivot].is_zero() {
                let f = r[*pivot].clone();
                for (x, y) in r.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        is_zero(&self.reduce(v))
    }

    /// Adds `v` if it is independent of the current span.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        let mut r = self.reduce(v);
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[pivot].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.echelon.iter_mut() {
            if !row[pivot].is_zero() {
                let f = row[pivot].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    *x -= &f * y;
                }
            }
        }
        self.echelon.push((pivot, r));
        self.accepted.push(v.to_vec());
        true
    }
}

pub fn rank(vectors: &[Vec<Q>]) -> usize {
    let mut s = Span::new();
    for v in vectors {
        s.insert(v);
    }
    s.rank()
}

/// Orthogonal basis (Gram-Schmidt, unnormalized) of the span of `vectors`.
pub fn orthogonalize(vectors: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = Vec::new();
    for v in vectors {
        let r = residual(v, &out);
        if !is_zero(&r) {
            out.push(r);
        }
    }
    out
}

/// `v` minus its orthogonal projection onto the span of an orthogonal family.
pub fn residual(v: &[Q], orthogonal: &[Vec<Q>]) -> Vec<Q> {
    let mut r = v.to_vec();
    for b in orthogonal {
        let c = dot(&r, b) / dot(b, b);
        for (x, y) in r.iter_mut().zip(b) {
            *x -= &c * y;
        }
    }
    r
}

/// First vector of `candidates` with a nonzero component orthogonal to
/// `avoid`, returned as that component.
pub fn orthogonal_direction(candidates: &[Vec<Q>], avoid: &[Vec<Q>]) -> Option<Vec<Q>> {
    let ortho = orthogonalize(avoid);
    candidates
        .iter()
        .map(|c| residual(c, &ortho))
        .find(|r| !is_zero(r))
}

/// Basis of the orthogonal complement of the span of `vectors` in `Q^n`.
pub fn complement(vectors: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    let mut ortho = orthogonalize(vectors);
    let mut out = Vec::new();
    for i in 0..n {
        let mut e = vec![Q::zero(); n];
        e[i] = Q::one();
        let r = residual(&e, &ortho);
        if !is_zero(&r) {
            ortho.push(r.clone());
            out.push(r);
        }
    }
    out
}

/// Determinant by Gaussian elimination over `Q`.
pub fn det(rows: &[Vec<Q>]) -> Q {
    let n = rows.len();
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let piv = m[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &piv;
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qvec};

    #[test]
    fn span_rank_and_membership() {
        let mut s = Span::new();
        assert!(s.insert(&qvec(&[1, 1, 0])));
        assert!(!s.insert(&qvec(&[2, 2, 0])));
        assert!(s.insert(&qvec(&[0, 1, 1])));
        assert!(s.contains(&qvec(&[1, 2, 1])));
        assert!(!s.contains(&qvec(&[0, 0, 1])));
        assert_eq!(s.rank(), 2);
        assert_eq!(s.basis().len(), 2);
    }

    #[test]
    fn determinants() {
        assert_eq!(det(&[qvec(&[1, 1]), qvec(&[1, -1])]), q(-2));
        assert_eq!(det(&[qvec(&[0, 1]), qvec(&[1, 0])]), q(-1));
        assert_eq!(det(&[qvec(&[1, 2]), qvec(&[2, 4])]), q(0));
    }

    #[test]
    fn complement_is_orthogonal() {
        let c = complement(&[qvec(&[1, 1, 0])], 3);
        assert_eq!(c.len(), 2);
        for v in &c {
            assert_eq!(dot(v, &qvec(&[1, 1, 0])), q(0));
        }
    }
}

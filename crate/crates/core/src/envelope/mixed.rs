//! Sup-convolution of roofs and the mixed integral.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use super::RoofFunction;
use crate::arith::Q;
use crate::error::{Error, Result};
use crate::geometry::linalg;
use crate::logvalue::LogValue;

/// `(f ⊞ g)(x) = sup_{y + z = x} f(y) + g(z)` on the Minkowski sum of the
/// domains. It is the roof of the pairwise sums of the lifted vertices.
pub fn sup_convolution(f: &RoofFunction, g: &RoofFunction) -> Result<RoofFunction> {
    if f.ambient_dim() != g.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: f.ambient_dim(),
            found: g.ambient_dim(),
        });
    }
    let gv = g.roof_vertices();
    let mut best: BTreeMap<Vec<Q>, LogValue> = BTreeMap::new();
    for (x, fx) in f.roof_vertices() {
        for (y, gy) in &gv {
            let h = &fx + gy;
            let p = linalg::add(&x, y);
            match best.get(&p) {
                Some(old) if old.compare(&h)? != Ordering::Less => {}
                _ => {
                    best.insert(p, h);
                }
            }
        }
    }
    let (points, heights) = best.into_iter().unzip();
    RoofFunction::from_lifted(points, heights)
}

/// `MI(f_0, ..., f_n) = Σ_{S ≠ ∅} (-1)^{n+1-|S|} ∫ ⊞_{i∈S} f_i` for `n + 1`
/// roofs on `Q^n`.
pub fn mixed_integral(fs: &[RoofFunction]) -> Result<LogValue> {
    let k = fs.len();
    let n = fs.first().ok_or(Error::Empty("roof list"))?.ambient_dim();
    if let Some(f) = fs.iter().find(|f| f.ambient_dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.ambient_dim(),
        });
    }
    if k != n + 1 {
        return Err(Error::invalid(format!(
            "mixed integral on Q^{n} takes {} roofs, got {k}",
            n + 1
        )));
    }
    // Repeated roofs make many subsets give the same sum, so partial sums
    // are keyed by how often each distinct roof occurs.
    let class: Vec<usize> = (0..k)
        .map(|i| {
            (0..i)
                .find(|&j| fs[j].points() == fs[i].points() && fs[j].heights() == fs[i].heights())
                .unwrap_or(i)
        })
        .collect();
    let counts = |mask: usize| {
        let mut c = vec![0usize; k];
        for i in (0..k).filter(|i| mask & (1 << i) != 0) {
            c[class[i]] += 1;
        }
        c
    };
    let mut sums: HashMap<Vec<usize>, (RoofFunction, LogValue)> = HashMap::new();
    let mut total = LogValue::zero();
    for mask in 1usize..1 << k {
        let key = counts(mask);
        if !sums.contains_key(&key) {
            let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
            let rest = mask & !(1 << top);
            let roof = if rest == 0 {
                fs[top].clone()
            } else {
                let (smaller, _) = &sums[&counts(rest)];
                sup_convolution(smaller, &fs[top])?
            };
            let integral = roof.integrate();
            sums.insert(key.clone(), (roof, integral));
        }
        let integral = &sums[&key].1;
        if (k - mask.count_ones() as usize).is_multiple_of(2) {
            total += integral;
        } else {
            total -= integral;
        }
    }
    Ok(total)
}

//! Roof functions: upper envelopes of lifted point configurations.
//!
//! Points `x_i` of `Q^n` carry heights `h_i` in [`LogValue`]. The roof is
//! the smallest concave function with `θ(x_i) ≥ h_i`; its domains of
//! linearity are the cells of the induced coherent subdivision.
//!
//! The construction never forms a lifted hull in `R^{n+1}`. An affine
//! majorant is lowered about a hyperplane of `Q^n` until it touches another
//! lifted point; the step size is a `LogValue` divided by a rational, so only
//! exact sign tests are needed. Starting from a constant majorant this yields
//! one cell, and pushing across every interior wall of every cell yields the
//! rest.

mod mixed;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet, VecDeque};

use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{primitive, Q};
use crate::error::{Error, Result};
use crate::geometry::linalg::{self, dot, orthogonal_direction, Span};
use crate::geometry::polytope::{simplex_volume, FaceTrees};
use crate::geometry::Polytope;
use crate::logvalue::LogValue;

pub use mixed::{mixed_integral, sup_convolution};

/// A lattice configuration `A` with one weight per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedConfig {
    points: Vec<Vec<i64>>,
    weights: Vec<LogValue>,
}

impl WeightedConfig {
    pub fn new(points: Vec<Vec<i64>>, weights: Vec<LogValue>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("configuration"));
        }
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                found: weights.len(),
            });
        }
        let n = points[0].len();
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
        Ok(Self { points, weights })
    }

    /// All weights zero.
    pub fn flat(points: Vec<Vec<i64>>) -> Result<Self> {
        let weights = vec![LogValue::zero(); points.len()];
        Self::new(points, weights)
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn weights(&self) -> &[LogValue] {
        &self.weights
    }
}

/// `x ↦ ⟨gradient, x⟩ + constant` with `LogValue` coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineFunction {
    gradient: Vec<LogValue>,
    constant: LogValue,
}

impl AffineFunction {
    pub fn new(gradient: Vec<LogValue>, constant: LogValue) -> Self {
        Self { gradient, constant }
    }

    pub fn constant_fn(value: LogValue, n: usize) -> Self {
        Self::new(vec![LogValue::zero(); n], value)
    }

    pub fn gradient(&self) -> &[LogValue] {
        &self.gradient
    }

    pub fn constant(&self) -> &LogValue {
        &self.constant
    }

    pub fn eval(&self, x: &[Q]) -> LogValue {
        let mut out = self.constant.clone();
        for (g, xi) in self.gradient.iter().zip(x) {
            if !xi.is_zero() {
                out += &g.scale(xi);
            }
        }
        out
    }

    /// `self + step · (⟨dir, x⟩ - level)`.
    fn tilted(&self, dir: &[Q], level: &Q, step: &LogValue) -> Self {
        let gradient = self
            .gradient
            .iter()
            .zip(dir)
            .map(|(g, d)| g + &step.scale(d))
            .collect();
        let constant = &self.constant - &step.scale(level);
        Self { gradient, constant }
    }
}

/// One domain of linearity of a roof.
#[derive(Debug, Clone)]
pub struct Cell {
    support: Vec<usize>,
    polytope: Polytope,
    affine: AffineFunction,
}

impl Cell {
    /// Indices of the lifted points lying on this piece of the roof.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn affine(&self) -> &AffineFunction {
        &self.affine
    }

    pub fn volume(&self) -> Q {
        self.polytope.volume()
    }

    /// Exact integral of the cell's affine function over the cell.
    pub fn integral(&self) -> LogValue {
        if !self.polytope.is_full_dimensional() {
            return LogValue::zero();
        }
        let n = self.polytope.ambient_dim();
        let mut total = LogValue::zero();
        for s in self.polytope.simplices() {
            let vol = simplex_volume(&s);
            let sum: LogValue = s.iter().map(|v| self.affine.eval(v)).sum();
            total += &sum.scale(&(vol / Q::from(num_bigint::BigInt::from(n + 1))));
        }
        total
    }
}

/// The concave piecewise-affine roof of a lifted point set.
#[derive(Debug, Clone)]
pub struct RoofFunction {
    points: Vec<Vec<Q>>,
    heights: Vec<LogValue>,
    domain: Polytope,
    cells: Vec<Cell>,
    on_roof: Vec<bool>,
}

/// Findings of [`RoofFunction::audit`]; every flag is an exact check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoofAudit {
    pub cell_volumes_sum_to_domain: bool,
    pub majorizes_heights: bool,
    pub on_roof_flags_consistent: bool,
    pub continuous: bool,
    pub concave_on_vertex_midpoints: bool,
    /// Every cell vertex is an input point at its own height, which makes
    /// the roof the least concave majorant.
    pub vertices_are_lifted_points: bool,
}

impl RoofAudit {
    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    /// Names of the checks that failed.
    pub fn failures(&self) -> Vec<&'static str> {
        [
            (self.cell_volumes_sum_to_domain, "cell volumes sum to the domain"),
            (self.majorizes_heights, "majorizes the heights"),
            (self.on_roof_flags_consistent, "on-roof flags"),
            (self.continuous, "continuity"),
            (self.concave_on_vertex_midpoints, "concavity"),
            (self.vertices_are_lifted_points, "vertices are lifted points"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect()
    }
}

/// The roof `θ_{A,τ}` of a weighted configuration.
pub fn upper_envelope(w: &WeightedConfig) -> Result<RoofFunction> {
    let points = w
        .points
        .iter()
        .map(|p| p.iter().map(|&x| Q::from(num_bigint::BigInt::from(x))).collect())
        .collect();
    RoofFunction::from_lifted(points, w.weights.clone())
}

/// Evaluates `f` at `x`; see [`RoofFunction::evaluate`].
pub fn evaluate(f: &RoofFunction, x: &[Q], cell: Option<usize>) -> Result<LogValue> {
    f.evaluate(x, cell)
}

pub fn integrate(f: &RoofFunction) -> LogValue {
    f.integrate()
}

struct Lifted<'a> {
    points: &'a [Vec<Q>],
    heights: &'a [LogValue],
    coords: Vec<Vec<f64>>,
    approx: Vec<(f64, f64)>,
}

/// Double-precision image of an affine function, each coefficient paired
/// with its error scale as in [`LogValue::approx`].
struct Approx {
    gradient: Vec<(f64, f64)>,
    constant: (f64, f64),
}

impl Approx {
    fn of(f: &AffineFunction) -> Self {
        Self {
            gradient: f.gradient.iter().map(LogValue::approx).collect(),
            constant: f.constant.approx(),
        }
    }
}

impl<'a> Lifted<'a> {
    fn new(points: &'a [Vec<Q>], heights: &'a [LogValue]) -> Self {
        let coords = points
            .iter()
            .map(|p| p.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
            .collect();
        let approx = heights.iter().map(LogValue::approx).collect();
        Self {
            points,
            heights,
            coords,
            approx,
        }
    }

    /// Floating-point enclosure of `f(x_j) - h_j`, as value and error bound.
    fn gap_enclosure(&self, f: &Approx, j: usize) -> Option<(f64, f64)> {
        let (h, hm) = self.approx[j];
        let mut v = f.constant.0 - h;
        let mut m = f.constant.1 + hm;
        for ((gv, gm), x) in f.gradient.iter().zip(&self.coords[j]) {
            v += gv * x;
            m += gm * x.abs();
        }
        let err = 1e-9 * m + f64::MIN_POSITIVE;
        (v.is_finite() && err.is_finite()).then_some((v, err))
    }

    fn tight(&self, f: &AffineFunction) -> Vec<usize> {
        let fa = Approx::of(f);
        (0..self.points.len())
            .filter(|&j| {
                // Floating point can only rule a point out, never in.
                let clear = self.gap_enclosure(&fa, j).is_some_and(|(v, e)| v.abs() > e);
                !clear && f.eval(&self.points[j]) == self.heights[j]
            })
            .collect()
    }

    /// Largest step `s ≥ 0` keeping `f + s·(⟨dir, x⟩ - level)` above every
    /// lifted point; `None` if no point lies where the tilt descends.
    fn max_step(&self, f: &AffineFunction, dir: &[Q], level: &Q) -> Result<Option<LogValue>> {
        let fa = Approx::of(f);
        // Each candidate carries an enclosure of its step when one is
        // available; only those that may attain the minimum are evaluated
        // exactly.
        let mut candidates: Vec<(usize, Q, Option<(f64, f64)>)> = Vec::new();
        let mut cutoff = f64::INFINITY;
        for (j, x) in self.points.iter().enumerate() {
            let drop = level - dot(dir, x);
            if !drop.is_positive() {
                continue;
            }
            let bounds = self.gap_enclosure(&fa, j).and_then(|(v, e)| {
                let d = drop.to_f64().filter(|d| d.is_normal())?;
                let widen = |t: f64| t.abs() * 1e-12 + f64::MIN_POSITIVE;
                let (lo, hi) = ((v - e) / d, (v + e) / d);
                Some((lo - widen(lo), hi + widen(hi)))
            });
            if let Some((_, hi)) = bounds {
                cutoff = cutoff.min(hi);
            }
            candidates.push((j, drop, bounds));
        }
        let mut best: Option<LogValue> = None;
        for (j, drop, bounds) in candidates {
            if bounds.is_some_and(|(lo, _)| lo > cutoff) {
                continue;
            }
            let step = (f.eval(&self.points[j]) - &self.heights[j]).div_rational(&drop);
            best = match best {
                Some(b) if b.compare(&step)? != Ordering::Greater => Some(b),
                _ => Some(step),
            };
        }
        Ok(best)
    }

    /// Lowers the constant majorant until its contact set spans the affine
    /// hull of all points.
    fn initial_cell(&self, directions: &[Vec<Q>]) -> Result<(AffineFunction, Vec<usize>)> {
        let n = self.points[0].len();
        let top = LogValue::max_of(self.heights)?;
        let mut f = AffineFunction::constant_fn(top, n);
        let mut tight = self.tight(&f);
        loop {
            let base = &self.points[tight[0]];
            let mut contact = Span::new();
            for &t in &tight[1..] {
                contact.insert(&linalg::sub(&self.points[t], base));
            }
            if contact.rank() == directions.len() {
                return Ok((f, tight));
            }
            let mut dir = primitive(
                &orthogonal_direction(directions, contact.basis())
                    .expect("contact set below full rank leaves a free direction"),
            );
            let mut level = dot(&dir, base);
            let mut step = self.max_step(&f, &dir, &level)?;
            if step.is_none() {
                dir = linalg::neg(&dir);
                level = -level;
                step = self.max_step(&f, &dir, &level)?;
            }
            let step = step.expect("points off the contact span exist on some side");
            f = f.tilted(&dir, &level, &step);
            tight = self.tight(&f);
        }
    }
}

impl RoofFunction {
    /// Roof of arbitrary rational points with `LogValue` heights.
    pub fn from_lifted(points: Vec<Vec<Q>>, heights: Vec<LogValue>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("lifted point set"));
        }
        if points.len() != heights.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                found: heights.len(),
            });
        }
        let n = points[0].len();
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
        let all: Vec<usize> = (0..points.len()).collect();
        let mut trees = FaceTrees::new(&points);
        let domain_tree = trees.get(&all);
        let domain = Polytope::from_tree(&points, &all, &domain_tree);
        let lifted = Lifted::new(&points, &heights);

        let (f0, t0) = lifted.initial_cell(&domain_tree.directions)?;
        let mut seen: HashSet<Vec<usize>> = HashSet::from([t0.clone()]);
        let mut queue = VecDeque::from([(f0, t0)]);
        let mut cells = Vec::new();
        while let Some((f, support)) = queue.pop_front() {
            let tree = trees.get(&support);
            for wall in &tree.facets {
                // Descend across the wall: the tilt vanishes on it and
                // decreases beyond it.
                let dir = linalg::neg(&wall.normal);
                let level = -wall.offset.clone();
                let Some(step) = lifted.max_step(&f, &dir, &level)? else {
                    continue;
                };
                let next = f.tilted(&dir, &level, &step);
                let next_support = lifted.tight(&next);
                if seen.insert(next_support.clone()) {
                    queue.push_back((next, next_support));
                }
            }
            let polytope = Polytope::from_tree(&points, &support, &tree);
            cells.push(Cell {
                support,
                polytope,
                affine: f,
            });
        }
        cells.sort_by(|a, b| a.support.cmp(&b.support));

        let mut on_roof = vec![false; points.len()];
        for c in &cells {
            for &i in &c.support {
                on_roof[i] = true;
            }
        }
        Ok(Self {
            points,
            heights,
            domain,
            cells,
            on_roof,
        })
    }

    /// The constant function `value` on the hull of `points`.
    pub fn constant(points: Vec<Vec<Q>>, value: LogValue) -> Result<Self> {
        let heights = vec![value; points.len()];
        Self::from_lifted(points, heights)
    }

    pub fn ambient_dim(&self) -> usize {
        self.domain.ambient_dim()
    }

    pub fn points(&self) -> &[Vec<Q>] {
        &self.points
    }

    pub fn heights(&self) -> &[LogValue] {
        &self.heights
    }

    pub fn domain(&self) -> &Polytope {
        &self.domain
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Whether lifted point `i` lies on the roof (as opposed to below it).
    pub fn on_roof(&self, i: usize) -> bool {
        self.on_roof[i]
    }

    /// `θ(x)` for `x` in the domain, or with `cell = Some(k)` the affine
    /// function of cell `k` extended to all of `Q^n`.
    pub fn evaluate(&self, x: &[Q], cell: Option<usize>) -> Result<LogValue> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: x.len(),
            });
        }
        if let Some(k) = cell {
            let c = self
                .cells
                .get(k)
                .ok_or_else(|| Error::invalid(format!("no cell {k}")))?;
            return Ok(c.affine.eval(x));
        }
        if !self.domain.contains(x) {
            return Err(Error::OutsideDomain);
        }
        let c = self
            .cells
            .iter()
            .find(|c| c.polytope.contains(x))
            .expect("cells cover the domain");
        Ok(c.affine.eval(x))
    }

    /// `∫_{domain} θ dx` with respect to Lebesgue measure on `Q^n`; zero for
    /// a lower-dimensional domain.
    pub fn integrate(&self) -> LogValue {
        if !self.domain.is_full_dimensional() {
            return LogValue::zero();
        }
        self.cells.iter().map(Cell::integral).sum()
    }

    /// Distinct vertices of the subdivision with their roof values.
    pub fn roof_vertices(&self) -> Vec<(Vec<Q>, LogValue)> {
        let mut out: BTreeMap<Vec<Q>, LogValue> = BTreeMap::new();
        for c in &self.cells {
            for v in c.polytope.vertices() {
                out.entry(v.clone()).or_insert_with(|| c.affine.eval(v));
            }
        }
        out.into_iter().collect()
    }

    /// Same domain, same cells and same values on them.
    pub fn same_function(&self, other: &Self) -> bool {
        let key = |f: &Self| {
            let mut v: Vec<Vec<(Vec<Q>, LogValue)>> = f
                .cells
                .iter()
                .map(|c| {
                    let mut vs: Vec<(Vec<Q>, LogValue)> = c
                        .polytope
                        .vertices()
                        .iter()
                        .map(|x| (x.clone(), c.affine.eval(x)))
                        .collect();
                    vs.sort_by(|a, b| a.0.cmp(&b.0));
                    vs
                })
                .collect();
            v.sort_by(|a, b| {
                let ka: Vec<&Vec<Q>> = a.iter().map(|p| &p.0).collect();
                let kb: Vec<&Vec<Q>> = b.iter().map(|p| &p.0).collect();
                ka.cmp(&kb)
            });
            v
        };
        self.ambient_dim() == other.ambient_dim() && key(self) == key(other)
    }

    /// Exact structural checks of the roof.
    pub fn audit(&self) -> Result<RoofAudit> {
        let cell_sum: Q = self.cells.iter().map(Cell::volume).sum();
        let cell_volumes_sum_to_domain = cell_sum == self.domain.volume();

        let mut majorizes_heights = true;
        let mut on_roof_flags_consistent = true;
        for (i, (x, h)) in self.points.iter().zip(&self.heights).enumerate() {
            let theta = self.evaluate(x, None)?;
            match theta.compare(h)? {
                Ordering::Less => majorizes_heights = false,
                Ordering::Equal => on_roof_flags_consistent &= self.on_roof[i],
                Ordering::Greater => on_roof_flags_consistent &= !self.on_roof[i],
            }
        }

        let vertices = self.roof_vertices();
        let mut continuous = true;
        for (v, value) in &vertices {
            for c in self.cells.iter().filter(|c| c.polytope.contains(v)) {
                continuous &= c.affine.eval(v) == *value;
            }
        }

        let vertices_are_lifted_points = vertices.iter().all(|(v, value)| {
            self.points
                .iter()
                .zip(&self.heights)
                .any(|(x, h)| x == v && h == value)
        });

        let mut concave = true;
        let half = Q::new(1.into(), 2.into());
        for (i, (x, fx)) in vertices.iter().enumerate() {
            for (y, fy) in &vertices[i + 1..] {
                let mid: Vec<Q> = linalg::scale(&linalg::add(x, y), &half);
                let chord = (fx + fy).scale(&half);
                concave &= self.evaluate(&mid, None)?.compare(&chord)? != Ordering::Less;
            }
        }

        Ok(RoofAudit {
            cell_volumes_sum_to_domain,
            majorizes_heights,
            on_roof_flags_consistent,
            continuous,
            concave_on_vertex_midpoints: concave,
            vertices_are_lifted_points,
        })
    }
}

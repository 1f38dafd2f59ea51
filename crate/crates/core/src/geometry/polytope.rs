//! Exact convex hulls by gift wrapping.
//!
//! Facets are found by rotating a supporting hyperplane about a ridge until
//! it hits the next point; ridges come from the recursively computed hull of
//! each facet. The recursion leaves a face tree that is reused for
//! triangulation, so volumes and integrals never redo the hull.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_traits::{Signed, ToPrimitive, Zero};

use super::linalg::{self, complement, dot, orthogonal_direction, primitive_add, Span};
use crate::arith::{factorial, primitive, Q};
use crate::error::{Error, Result};

/// `⟨normal, x⟩ ≤ offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<Q>,
    pub offset: Q,
}

impl Halfspace {
    pub fn slack(&self, x: &[Q]) -> Q {
        &self.offset - dot(&self.normal, x)
    }
}

/// `⟨normal, x⟩ = offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperplane {
    pub normal: Vec<Q>,
    pub offset: Q,
}

#[derive(Debug, Clone)]
pub(crate) struct FacetNode {
    pub normal: Vec<Q>,
    pub offset: Q,
    /// Every input index lying on the facet, duplicates included.
    pub tight: Vec<usize>,
    pub face: FaceTree,
}

/// Hull of a subset of a shared point list, with the hulls of its facets.
#[derive(Debug, Clone)]
pub(crate) struct FaceTree {
    pub dim: usize,
    pub origin: usize,
    pub directions: Vec<Vec<Q>>,
    pub facets: Vec<FacetNode>,
    /// One representative index per distinct vertex, ascending.
    pub vertices: Vec<usize>,
}

fn tight_set(points: &[Vec<Q>], idx: &[usize], normal: &[Q], offset: &Q) -> Vec<usize> {
    idx.iter()
        .copied()
        .filter(|&j| dot(normal, &points[j]) == *offset)
        .collect()
}

/// Smallest index of each distinct point, in ascending order.
fn representatives(points: &[Vec<Q>], idx: &[usize]) -> Vec<usize> {
    let mut first: BTreeMap<&[Q], usize> = BTreeMap::new();
    for &j in idx {
        first
            .entry(points[j].as_slice())
            .and_modify(|k| *k = (*k).min(j))
            .or_insert(j);
    }
    let mut reps: Vec<usize> = first.into_values().collect();
    reps.sort_unstable();
    reps
}

/// Max over `j` with `⟨normal, x_j⟩ < offset` of
/// `(⟨dir, x_j⟩ - level) / (offset - ⟨normal, x_j⟩)`.
fn rotation_angle(
    points: &[Vec<Q>],
    idx: &[usize],
    normal: &[Q],
    offset: &Q,
    dir: &[Q],
    level: &Q,
) -> Option<Q> {
    // Kept as (rise, gap) with gap > 0 so that comparing needs no division.
    let mut best: Option<(Q, Q)> = None;
    for &j in idx {
        let gap = offset - dot(normal, &points[j]);
        if gap.is_positive() {
            let rise = dot(dir, &points[j]) - level;
            if best.as_ref().is_none_or(|(r, g)| &rise * g > r * &gap) {
                best = Some((rise, gap));
            }
        }
    }
    best.map(|(r, g)| r / g)
}

pub(crate) fn face_tree(points: &[Vec<Q>], idx: &[usize]) -> FaceTree {
    FaceTrees::new(points).get(idx)
}

/// Face trees over one point list, memoized by index set. Neighbouring
/// facets share ridges, and neighbouring roof cells share walls.
pub(crate) struct FaceTrees<'a> {
    points: &'a [Vec<Q>],
    /// The points again as machine integers, when they all are small ones.
    small: Option<Vec<Vec<i64>>>,
    memo: HashMap<Vec<usize>, FaceTree>,
}

/// Bound on coordinates and normal entries for the `i128` path; dot
/// products stay below `2^55` and their pairwise products below `2^111`.
const SMALL: i64 = 1 << 24;

fn small_ints(v: &[Q]) -> Option<Vec<i64>> {
    v.iter()
        .map(|x| {
            let n = x.is_integer().then(|| x.numer().to_i64())??;
            (n.abs() < SMALL).then_some(n)
        })
        .collect()
}

fn small_scalar(x: &Q) -> Option<i128> {
    let n = x.is_integer().then(|| x.numer().to_i64())??;
    (n.abs() < 1 << 54).then_some(n as i128)
}

fn small_dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

impl<'a> FaceTrees<'a> {
    pub fn new(points: &'a [Vec<Q>]) -> Self {
        let small = if points.len() <= 1 << 16 && points.iter().all(|p| p.len() <= 64) {
            points.iter().map(|p| small_ints(p)).collect()
        } else {
            None
        };
        Self {
            points,
            small,
            memo: HashMap::new(),
        }
    }

    fn tight_set(&self, idx: &[usize], normal: &[Q], offset: &Q) -> Vec<usize> {
        if let (Some(pts), Some(u), Some(c)) = (&self.small, small_ints(normal), small_scalar(offset)) {
            return idx.iter().copied().filter(|&j| small_dot(&u, &pts[j]) == c).collect();
        }
        tight_set(self.points, idx, normal, offset)
    }

    fn rotation_angle(&self, idx: &[usize], normal: &[Q], offset: &Q, dir: &[Q], level: &Q) -> Option<Q> {
        let small = (
            &self.small,
            small_ints(normal),
            small_scalar(offset),
            small_ints(dir),
            small_scalar(level),
        );
        let (Some(pts), Some(u), Some(c), Some(d), Some(l)) = small else {
            return rotation_angle(self.points, idx, normal, offset, dir, level);
        };
        let mut best: Option<(i128, i128)> = None;
        for &j in idx {
            let gap = c - small_dot(&u, &pts[j]);
            if gap > 0 {
                let rise = small_dot(&d, &pts[j]) - l;
                if best.is_none_or(|(r, g)| rise * g > r * gap) {
                    best = Some((rise, gap));
                }
            }
        }
        best.map(|(r, g)| Q::new(r.into(), g.into()))
    }

    pub fn get(&mut self, idx: &[usize]) -> FaceTree {
        if let Some(t) = self.memo.get(idx) {
            return t.clone();
        }
        let t = self.build(idx);
        self.memo.insert(idx.to_vec(), t.clone());
        t
    }

    fn build(&mut self, idx: &[usize]) -> FaceTree {
        assert!(!idx.is_empty(), "hull of no points");
        let points = self.points;
        let reps = representatives(points, idx);
        let origin = reps[0];
        let mut span = Span::new();
        for &r in &reps[1..] {
            span.insert(&linalg::sub(&points[r], &points[origin]));
        }
        let directions = span.basis().to_vec();
        let dim = directions.len();
        match dim {
            0 => FaceTree {
                dim,
                origin,
                directions,
                facets: Vec::new(),
                vertices: vec![origin],
            },
            1 => self.segment_tree(idx, origin, directions),
            _ if reps.len() == dim + 1 => self.simplex_tree(idx, reps, directions),
            _ => self.wrap(idx, &reps, origin, directions),
        }
    }

    /// Every facet of a simplex omits exactly one vertex, so no wrapping
    /// is needed.
    fn simplex_tree(&mut self, idx: &[usize], reps: Vec<usize>, directions: Vec<Vec<Q>>) -> FaceTree {
        let points = self.points;
        let mut facets = Vec::with_capacity(reps.len());
        for &apex in &reps {
            let base: Vec<usize> = reps.iter().copied().filter(|&r| r != apex).collect();
            let edges: Vec<Vec<Q>> = base[1..].iter().map(|&r| linalg::sub(&points[r], &points[base[0]])).collect();
            let inward = orthogonal_direction(&[linalg::sub(&points[apex], &points[base[0]])], &edges)
                .expect("simplex vertices are affinely independent");
            let normal = primitive(&linalg::neg(&inward));
            let offset = dot(&normal, &points[base[0]]);
            let tight = self.tight_set(idx, &normal, &offset);
            let face = self.get(&tight);
            facets.push(FacetNode {
                normal,
                offset,
                tight,
                face,
            });
        }
        FaceTree {
            dim: directions.len(),
            origin: reps[0],
            directions,
            facets,
            vertices: reps,
        }
    }

    fn segment_tree(&mut self, idx: &[usize], origin: usize, directions: Vec<Vec<Q>>) -> FaceTree {
        let points = self.points;
        let u = primitive(&directions[0]);
        let values: Vec<Q> = idx.iter().map(|&j| dot(&u, &points[j])).collect();
        let max = values.iter().max().unwrap().clone();
        let min = values.iter().min().unwrap().clone();
        let mut facets = Vec::with_capacity(2);
        let mut vertices = Vec::with_capacity(2);
        for (normal, offset) in [(u.clone(), max), (linalg::neg(&u), -min)] {
            let tight = self.tight_set(idx, &normal, &offset);
            let face = self.get(&tight);
            vertices.push(face.origin);
            facets.push(FacetNode {
                normal,
                offset,
                tight,
                face,
            });
        }
        vertices.sort_unstable();
        FaceTree {
            dim: 1,
            origin,
            directions,
            facets,
            vertices,
        }
    }

    fn wrap(
        &mut self,
        idx: &[usize],
        reps: &[usize],
        origin: usize,
        directions: Vec<Vec<Q>>,
    ) -> FaceTree {
        let points = self.points;
        let dim = directions.len();

        // Supporting hyperplane, tilted until its contact set spans a facet.
        let mut normal = primitive(&directions[0]);
        let mut offset = idx.iter().map(|&j| dot(&normal, &points[j])).max().unwrap();
        let mut tight = self.tight_set(idx, &normal, &offset);
        loop {
            let base = &points[tight[0]];
            let mut contact = Span::new();
            for &t in &tight[1..] {
                contact.insert(&linalg::sub(&points[t], base));
            }
            if contact.rank() == dim - 1 {
                break;
            }
            let mut avoid = contact.basis().to_vec();
            avoid.push(normal.clone());
            let dir = primitive(
                &orthogonal_direction(&directions, &avoid)
                    .expect("contact set below facet dimension leaves a free direction"),
            );
            let level = dot(&dir, base);
            let lambda = self.rotation_angle(idx, &normal, &offset, &dir, &level)
                .expect("a proper supporting hyperplane misses some point");
            normal = primitive_add(&dir, &normal, &lambda);
            offset = dot(&normal, base);
            tight = self.tight_set(idx, &normal, &offset);
        }

        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        seen.insert(tight.clone());
        let mut queue = VecDeque::from([(normal, offset, tight)]);
        let mut facets = Vec::new();
        while let Some((normal, offset, tight)) = queue.pop_front() {
            let face = self.get(&tight);
            debug_assert_eq!(face.dim, dim - 1);
            for ridge in &face.facets {
                let lambda = self.rotation_angle(idx, &normal, &offset, &ridge.normal, &ridge.offset)
                    .expect("a facet of a full hull misses some point");
                let next = primitive_add(&ridge.normal, &normal, &lambda);
                let next_offset = dot(&next, &points[ridge.tight[0]]);
                let next_tight = self.tight_set(idx, &next, &next_offset);
                if seen.insert(next_tight.clone()) {
                    queue.push_back((next, next_offset, next_tight));
                }
            }
            facets.push(FacetNode {
                normal,
                offset,
                tight,
                face,
            });
        }

        let vertices = reps
            .iter()
            .copied()
            .filter(|r| {
                let normals: Vec<Vec<Q>> = facets
                    .iter()
                    .filter(|f| f.tight.contains(r))
                    .map(|f| f.normal.clone())
                    .collect();
                linalg::rank(&normals) == dim
            })
            .collect();

        FaceTree {
            dim,
            origin,
            directions,
            facets,
            vertices,
        }
    }
}

impl FaceTree {
    /// Pulling triangulation from the first vertex. Each simplex lists
    /// `dim + 1` representative indices.
    pub fn simplices(&self) -> Vec<Vec<usize>> {
        match self.dim {
            0 => vec![vec![self.vertices[0]]],
            1 => vec![self.vertices.clone()],
            _ => {
                let apex = self.vertices[0];
                let mut out = Vec::new();
                for f in self.facets.iter().filter(|f| !f.tight.contains(&apex)) {
                    for mut s in f.face.simplices() {
                        s.insert(0, apex);
                        out.push(s);
                    }
                }
                out
            }
        }
    }

    fn remap(&self, map: &HashMap<usize, usize>) -> FaceTree {
        FaceTree {
            dim: self.dim,
            origin: map[&self.origin],
            directions: self.directions.clone(),
            facets: self
                .facets
                .iter()
                .map(|f| FacetNode {
                    normal: f.normal.clone(),
                    offset: f.offset.clone(),
                    tight: f.tight.iter().map(|j| map[j]).collect(),
                    face: f.face.remap(map),
                })
                .collect(),
            vertices: self.vertices.iter().map(|j| map[j]).collect(),
        }
    }
}

/// Absolute volume of the simplex spanned by `n + 1` points of `Q^n`.
pub(crate) fn simplex_volume(vertices: &[&Vec<Q>]) -> Q {
    let n = vertices.len() - 1;
    let rows: Vec<Vec<Q>> = vertices[1..]
        .iter()
        .map(|v| linalg::sub(v, vertices[0]))
        .collect();
    linalg::det(&rows).abs() / Q::from_integer(factorial(n))
}

/// A convex polytope with both its vertex and facet descriptions.
///
/// Facets are stated relative to the affine hull: for a lower-dimensional
/// polytope the facet normals are only meaningful together with the
/// `equations`.
#[derive(Debug, Clone)]
pub struct Polytope {
    ambient: usize,
    points: Vec<Vec<Q>>,
    tree: FaceTree,
    vertices: Vec<Vec<Q>>,
    facets: Vec<Halfspace>,
    equations: Vec<Hyperplane>,
}

impl Polytope {
    /// Builds the polytope spanned by `points[idx]` from an existing tree.
    pub(crate) fn from_tree(points: &[Vec<Q>], idx: &[usize], tree: &FaceTree) -> Self {
        let map: HashMap<usize, usize> = idx.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let local: Vec<Vec<Q>> = idx.iter().map(|&j| points[j].clone()).collect();
        let tree = tree.remap(&map);
        let ambient = local[0].len();
        let vertices = tree.vertices.iter().map(|&j| local[j].clone()).collect();
        let facets = tree
            .facets
            .iter()
            .map(|f| Halfspace {
                normal: f.normal.clone(),
                offset: f.offset.clone(),
            })
            .collect();
        let x0 = &local[tree.origin];
        let equations = complement(&tree.directions, ambient)
            .into_iter()
            .map(|e| {
                let normal = primitive(&e);
                let offset = dot(&normal, x0);
                Hyperplane { normal, offset }
            })
            .collect();
        Polytope {
            ambient,
            points: local,
            tree,
            vertices,
            facets,
            equations,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        self.tree.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn vertices(&self) -> &[Vec<Q>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    /// Affine hull equations; empty for a full-dimensional polytope.
    pub fn equations(&self) -> &[Hyperplane] {
        &self.equations
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        x.len() == self.ambient
            && self.equations.iter().all(|h| dot(&h.normal, x) == h.offset)
            && self.facets.iter().all(|f| !f.slack(x).is_negative())
    }

    /// A triangulation using only vertices, as lists of coordinates.
    pub fn simplices(&self) -> Vec<Vec<&Vec<Q>>> {
        self.tree
            .simplices()
            .into_iter()
            .map(|s| s.into_iter().map(|j| &self.points[j]).collect())
            .collect()
    }

    /// Lebesgue volume in the ambient space; zero unless full-dimensional.
    pub fn volume(&self) -> Q {
        if !self.is_full_dimensional() {
            return Q::zero();
        }
        self.simplices().iter().map(|s| simplex_volume(s)).sum()
    }

    /// Axis-aligned bounding box as `(lower, upper)` corners.
    pub fn bounding_box(&self) -> (Vec<Q>, Vec<Q>) {
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for v in &self.vertices[1..] {
            for k in 0..self.ambient {
                if v[k] < lo[k] {
                    lo[k] = v[k].clone();
                }
                if v[k] > hi[k] {
                    hi[k] = v[k].clone();
                }
            }
        }
        (lo, hi)
    }
}

fn check_dims(points: &[Vec<Q>]) -> Result<usize> {
    let n = points.first().ok_or(Error::Empty("point list"))?.len();
    for p in points {
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
    }
    Ok(n)
}

pub fn convex_hull(points: &[Vec<Q>]) -> Result<Polytope> {
    check_dims(points)?;
    let idx: Vec<usize> = (0..points.len()).collect();
    let tree = face_tree(points, &idx);
    Ok(Polytope::from_tree(points, &idx, &tree))
}

pub fn volume(p: &Polytope) -> Q {
    p.volume()
}

pub fn minkowski_sum(p: &Polytope, q: &Polytope) -> Result<Polytope> {
    if p.ambient != q.ambient {
        return Err(Error::DimensionMismatch {
            expected: p.ambient,
            found: q.ambient,
        });
    }
    let sums: Vec<Vec<Q>> = p
        .vertices
        .iter()
        .flat_map(|a| q.vertices.iter().map(move |b| linalg::add(a, b)))
        .collect();
    convex_hull(&sums)
}

//! Exact rational convex geometry: hulls, volumes, Minkowski sums and
//! lattice indices.

pub mod lattice;
pub mod linalg;
pub mod polytope;

pub use lattice::{lattice_data, LatticeData};
pub use polytope::{convex_hull, minkowski_sum, volume, Halfspace, Hyperplane, Polytope};

mod common;

use common::qi;
use proptest::prelude::*;
use toric_heights::arith::{q_frac, Q};
use toric_heights::geometry::{convex_hull, lattice_data, minkowski_sum};

fn arb_point(n: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((-6i64..=6, 1i64..=3), n)
        .prop_map(|v| v.into_iter().map(|(a, b)| q_frac(a, b)).collect())
}

fn arb_cloud() -> impl Strategy<Value = Vec<Vec<Q>>> {
    (1usize..=3).prop_flat_map(|n| prop::collection::vec(arb_point(n), 1..10))
}

fn arb_int_cloud() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=3).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-4i64..=4, n), 1..8))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_point_satisfies_every_facet(pts in arb_cloud()) {
        let p = convex_hull(&pts).unwrap();
        for x in &pts {
            for h in p.facets() {
                prop_assert!(h.slack(x) >= qi(0));
            }
            for e in p.equations() {
                let v: Q = e.normal.iter().zip(x).map(|(a, b)| a * b).sum();
                prop_assert_eq!(&v, &e.offset);
            }
            prop_assert!(p.contains(x));
        }
        for v in p.vertices() {
            prop_assert!(pts.contains(v));
        }
    }

    #[test]
    fn doubling_scales_volume(pts in arb_cloud()) {
        let p = convex_hull(&pts).unwrap();
        prop_assume!(p.is_full_dimensional());
        let n = p.ambient_dim() as i32;
        let pp = minkowski_sum(&p, &p).unwrap();
        prop_assert_eq!(pp.volume(), p.volume() * qi(2).pow(n));
    }

    #[test]
    fn volume_under_translation_and_dilation(pts in arb_cloud(), shift in arb_point(3), k in 1i64..=4) {
        let p = convex_hull(&pts).unwrap();
        let n = p.ambient_dim();
        let moved: Vec<Vec<Q>> = pts.iter().map(|x| x.iter().zip(&shift).map(|(a, b)| a + b).collect()).collect();
        prop_assert_eq!(convex_hull(&moved).unwrap().volume(), p.volume());
        let dilated: Vec<Vec<Q>> = pts.iter().map(|x| x.iter().map(|a| a * qi(k)).collect()).collect();
        prop_assert_eq!(convex_hull(&dilated).unwrap().volume(), p.volume() * qi(k).pow(n as i32));
    }

    #[test]
    fn lattice_index_ignores_order_and_translation(mut pts in arb_int_cloud(), shift in prop::collection::vec(-5i64..=5, 3)) {
        let base = lattice_data(&pts).unwrap();
        pts.reverse();
        pts.rotate_left(1);
        let permuted = lattice_data(&pts).unwrap();
        prop_assert_eq!(base.invariant_factors(), permuted.invariant_factors());
        let moved: Vec<Vec<i64>> = pts.iter().map(|p| p.iter().zip(&shift).map(|(a, b)| a + b).collect()).collect();
        let moved = lattice_data(&moved).unwrap();
        prop_assert_eq!(base.rank(), moved.rank());
        prop_assert_eq!(base.saturation_index(), moved.saturation_index());
    }
}

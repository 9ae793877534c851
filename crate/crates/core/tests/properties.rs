use conerank::baselines::{topsis_rank, weighted_sum_rank, Sense, TopsisConfig};
use conerank::classify::alpha_best;
use conerank::number::int;
use conerank::ranking::{rank_all, rank_w, rank_w_in};
use conerank::set_ranking::{indicator_cx, set_rank, AlternativeSubset};
use conerank::{AlternativeSet, PolyhedralCone, Vector, WeightBounds};
use proptest::prelude::*;

fn vec_strategy(d: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(lo..=hi, d)
}

fn set_strategy(d: usize, max_n: usize) -> impl Strategy<Value = AlternativeSet> {
    prop::collection::vec(vec_strategy(d, -6, 6), 2..=max_n).prop_map(|pts| {
        let refs: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
        AlternativeSet::from_i64(&refs).unwrap()
    })
}

fn rays_strategy(d: usize) -> impl Strategy<Value = Vec<Vector>> {
    prop::collection::vec(vec_strategy(d, -3, 3), d..=d + 1)
        .prop_map(|rs| rs.iter().map(|r| Vector::from_i64(r).unwrap()).collect())
}

/// Proper, pointed and full-dimensional, so every ranking operation applies.
fn pointed_cone(d: usize) -> impl Strategy<Value = PolyhedralCone> {
    rays_strategy(d)
        .prop_map(move |rs| PolyhedralCone::from_rays(d, &rs).unwrap())
        .prop_filter("pointed, full-dimensional", |c| {
            c.validate_proper().is_ok() && c.is_pointed() && c.is_full_dimensional()
        })
}

fn case() -> impl Strategy<Value = (AlternativeSet, PolyhedralCone)> {
    (2usize..=3).prop_flat_map(|d| (set_strategy(d, 12), pointed_cone(d)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn duality_is_an_involution(d in 2usize..=4) {
        let c = PolyhedralCone::nonnegative_orthant(d);
        prop_assert!(c.dual().dual().same_set(&c));
    }

    #[test]
    fn dual_of_random_cone_round_trips(rs in (2usize..=3).prop_flat_map(rays_strategy)) {
        let d = rs[0].dim();
        let c = PolyhedralCone::from_rays(d, &rs).unwrap();
        prop_assert!(c.dual().dual().same_set(&c));
    }

    #[test]
    fn leq_is_membership_of_difference((c, y, z) in (2usize..=3).prop_flat_map(|d| {
        (pointed_cone(d), vec_strategy(d, -5, 5), vec_strategy(d, -5, 5))
    })) {
        let y = Vector::from_i64(&y).unwrap();
        let z = Vector::from_i64(&z).unwrap();
        prop_assert_eq!(c.leq(&y, &z).unwrap(), c.contains(&z.sub(&y)).unwrap());
        prop_assert!(c.leq(&y, &y).unwrap());
        // Pointed cones give an antisymmetric order.
        if c.leq(&y, &z).unwrap() && c.leq(&z, &y).unwrap() {
            prop_assert_eq!(y, z);
        }
    }

    #[test]
    fn witnesses_attain_the_rank((x, c) in case()) {
        let ranking = rank_all(&x, &c).unwrap();
        for (a, r) in x.iter().zip(&ranking.results) {
            prop_assert!(!r.witness_weights.is_empty());
            for w in &r.witness_weights {
                prop_assert_eq!(rank_w_in(&x, &c, w, &a.value).unwrap(), r.value);
            }
            prop_assert_eq!(r.counted_ids.len(), r.value);
            prop_assert!(r.value >= 1 && r.value <= x.len());
        }
    }

    #[test]
    fn halfspace_rank_is_weighted_rank((x, w) in (2usize..=3).prop_flat_map(|d| {
        (set_strategy(d, 12), vec_strategy(d, -4, 4))
    })) {
        let w = Vector::from_i64(&w).unwrap();
        prop_assume!(!w.is_zero());
        let h = PolyhedralCone::halfspace(&w).unwrap();
        let ranking = rank_all(&x, &h).unwrap();
        for (a, v) in x.iter().zip(ranking.values()) {
            prop_assert_eq!(v, rank_w(&x, &w, &a.value).unwrap());
        }
    }

    #[test]
    fn larger_cone_never_lowers_rank((x, c, extra) in (2usize..=3).prop_flat_map(|d| {
        (set_strategy(d, 10), pointed_cone(d), vec_strategy(d, -3, 3))
    })) {
        let mut rays = c.rays();
        rays.push(Vector::from_i64(&extra).unwrap());
        let bigger = PolyhedralCone::from_rays(c.dim(), &rays).unwrap();
        prop_assume!(bigger.is_pointed());
        prop_assert!(c.is_subset_of(&bigger));
        let small = rank_all(&x, &c).unwrap().values();
        let large = rank_all(&x, &bigger).unwrap().values();
        for (s, l) in small.iter().zip(&large) {
            prop_assert!(s <= l, "{small:?} vs {large:?}");
        }
    }

    #[test]
    fn set_rankings_grow_with_the_set(((x, c), mask) in case().prop_flat_map(|(x, c)| {
        let n = x.len();
        (Just((x, c)), prop::collection::vec(any::<(bool, bool)>(), n))
    })) {
        let ids: Vec<&str> = x.ids().collect();
        let a: Vec<&str> = ids.iter().zip(&mask).filter(|(_, m)| m.0 && m.1).map(|(i, _)| *i).collect();
        let b: Vec<&str> = ids.iter().zip(&mask).filter(|(_, m)| m.0).map(|(i, _)| *i).collect();
        let sa = AlternativeSubset::from_ids(&x, &a).unwrap();
        let sb = AlternativeSubset::from_ids(&x, &b).unwrap();
        prop_assert!(set_rank(&sa, &x, &c).unwrap().value <= set_rank(&sb, &x, &c).unwrap().value);
        prop_assert!(indicator_cx(&sa, &x, &c).unwrap().value <= indicator_cx(&sb, &x, &c).unwrap().value);
    }

    #[test]
    fn singleton_rank_bounds_dominated_count((x, c) in case()) {
        for id in x.ids() {
            let s = AlternativeSubset::from_ids(&x, &[id]).unwrap();
            prop_assert!(set_rank(&s, &x, &c).unwrap().value >= indicator_cx(&s, &x, &c).unwrap().value);
        }
    }

    #[test]
    fn alpha_best_threshold_shrinks_as_alpha_grows((x, c) in case(), a in 1i64..=100, b in 1i64..=100) {
        let (lo, hi) = (a.min(b), a.max(b));
        let n_lo = alpha_best(&x, &c, &int(lo)).unwrap();
        let n_hi = alpha_best(&x, &c, &int(hi)).unwrap();
        prop_assert!(n_lo.n >= n_hi.n);
        prop_assert!(n_lo.members.iter().all(|m| n_hi.members.contains(m)));
    }

    #[test]
    fn topsis_is_bounded_and_respects_dominance(
        pts in prop::collection::vec(vec_strategy(3, 1, 9), 2..=10),
        bump in vec_strategy(3, 0, 3),
    ) {
        let mut pts = pts;
        // Append a point dominating the first one.
        let dom: Vec<i64> = pts[0].iter().zip(&bump).map(|(p, b)| p + b).collect();
        pts.push(dom);
        let refs: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
        let x = AlternativeSet::from_i64(&refs).unwrap();
        let cfg = TopsisConfig { weights: vec![0.2, 0.3, 0.5], senses: vec![Sense::Benefit; 3] };
        let t = topsis_rank(&x, &cfg).unwrap();
        for (_, c) in &t {
            prop_assert!((0.0..=1.0).contains(c));
        }
        prop_assert!(t.last().unwrap().1 >= t[0].1 - 1e-12);
    }

    #[test]
    fn weighted_sums_agree_with_weighted_rank((x, w) in (2usize..=3).prop_flat_map(|d| {
        (set_strategy(d, 12), vec_strategy(d, 0, 5))
    })) {
        let w = Vector::from_i64(&w).unwrap();
        prop_assume!(!w.is_zero());
        let sums = weighted_sum_rank(&x, &w).unwrap();
        for (a, (_, s)) in x.iter().zip(&sums) {
            let count = sums.iter().filter(|(_, t)| t <= s).count();
            prop_assert_eq!(count, rank_w(&x, &w, &a.value).unwrap());
        }
    }
}

#[test]
fn cube_weight_bounds_have_six_vertices() {
    let b = WeightBounds::parse(&["0.2", "0.2", "0.2"], &["0.5", "0.5", "0.5"]).unwrap();
    let verts = b.vertices();
    // Every permutation of (0.2, 0.3, 0.5), found independently here.
    let mut expect = Vec::new();
    for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let vals = ["0.2", "0.3", "0.5"];
        expect.push(Vector::parse(&[vals[p[0]], vals[p[1]], vals[p[2]]]).unwrap());
    }
    expect.sort();
    assert_eq!(verts, expect);
    let cone = b.to_cone().unwrap();
    assert!(cone.dual().same_set(&PolyhedralCone::from_rays(3, &expect).unwrap()));
    for v in &expect {
        assert!(cone.dual().contains(v).unwrap());
    }
}

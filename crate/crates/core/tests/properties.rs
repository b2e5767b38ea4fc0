use proptest::prelude::*;

use massey_torus::jordan::{jordan_profile, partition_from_increments};
use massey_torus::lmodules::snf;
use massey_torus::polyalg::matrix::{charpoly, eval_poly_at, is_zero_mat, mat_mul, Mat};
use massey_torus::polyalg::poly::{Poly, PolyRing};
use massey_torus::scalars::{rat, Rational, Rationals, Ring};

fn poly_strategy(max_degree: usize) -> impl Strategy<Value = Poly<Rational>> {
    prop::collection::vec(-4i64..=4, 0..=max_degree + 1).prop_map(|c| Poly::from_ints(&c))
}

fn mat_strategy(max_n: usize) -> impl Strategy<Value = Mat<Rational>> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-3i64..=3, n * n)
            .prop_map(move |v| Mat::from_fn(n, n, |i, j| rat(v[i * n + j])))
    })
}

fn poly_mat_strategy() -> impl Strategy<Value = Mat<Poly<Rational>>> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| {
        prop::collection::vec(poly_strategy(2), r * c)
            .prop_map(move |v| Mat::from_fn(r, c, |i, j| v[i * c + j].clone()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ext_gcd_is_bezout(a in poly_strategy(4), b in poly_strategy(4)) {
        let ring = PolyRing::new(Rationals);
        let (g, s, t) = ring.ext_gcd(&a, &b);
        prop_assert_eq!(ring.add(&ring.mul(&s, &a), &ring.mul(&t, &b)), g.clone());
        if !g.is_zero_poly() {
            prop_assert!(ring.divides(&g, &a) && ring.divides(&g, &b));
        }
    }

    #[test]
    fn divrem_reconstructs(a in poly_strategy(5), b in poly_strategy(3)) {
        prop_assume!(!b.is_zero_poly());
        let ring = PolyRing::new(Rationals);
        let (q, r) = ring.divrem(&a, &b);
        prop_assert_eq!(ring.add(&ring.mul(&q, &b), &r), a);
        prop_assert!(r.is_zero_poly() || r.degree() < b.degree());
    }

    #[test]
    fn cayley_hamilton(a in mat_strategy(5)) {
        let chi = charpoly(&Rationals, &a).unwrap();
        prop_assert!(is_zero_mat(&Rationals, &eval_poly_at(&Rationals, &chi, &a)));
    }

    #[test]
    fn jordan_blocks_fill_the_generalized_eigenspace(a in mat_strategy(5)) {
        let q = Rationals;
        let ring = PolyRing::new(q);
        let chi = charpoly(&q, &a).unwrap();
        let p = ring.linear(&rat(-1));
        let profile = jordan_profile(&q, &a, &p).unwrap();
        let total: usize = profile.block_sizes.iter().sum();
        prop_assert_eq!(total, ring.valuation(&chi, &p));
        prop_assert!(profile.block_sizes.windows(2).all(|w| w[0] >= w[1]));
        prop_assert_eq!(profile.nu, profile.block_sizes.first().copied().unwrap_or(0));
        let back = jordan_profile(&q, &a.transpose(), &p).unwrap();
        prop_assert_eq!(back.block_sizes, profile.block_sizes);
    }

    #[test]
    fn partition_sums_increments(inc in prop::collection::vec(0usize..4, 0..6)) {
        let mut sorted = inc.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let parts = partition_from_increments(&sorted);
        prop_assert_eq!(parts.iter().sum::<usize>(), sorted.iter().sum::<usize>());
    }

    #[test]
    fn snf_is_exact(m in poly_mat_strategy()) {
        let ring = PolyRing::new(Rationals);
        let s = snf(&ring, &m);
        prop_assert_eq!(mat_mul(&ring, &mat_mul(&ring, &s.u, &m), &s.v), s.d.clone());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(ring.divides(&w[0], &w[1]));
        }
    }
}

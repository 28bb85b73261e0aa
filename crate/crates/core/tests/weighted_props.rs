use num_rational::BigRational;
use numsg::factorizations::{factorizations, length_set};
use numsg::weighted::{
    delta_w_brute_force, is_positive_multiple, max_delta_w, min_delta_w,
    verify_weighted_recurrences, w_ordering, weighted_length, weighted_length_set,
};
use numsg::{Semigroup, WeightVector};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = BigRational> {
    (1i64..=9, 1i64..=4).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn instance(max_len: usize, max_gen: i64) -> impl Strategy<Value = (Vec<i64>, Vec<BigRational>)> {
    prop::collection::btree_set(2..=max_gen, 1..=max_len)
        .prop_filter("gcd 1", |g| {
            g.iter().fold(0i64, |a, &b| num_integer::gcd(a, b)) == 1
        })
        .prop_flat_map(|g| {
            let k = g.len();
            (
                Just(g.into_iter().collect::<Vec<_>>()),
                prop::collection::vec(rational(), k),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn extreme_recurrences_hold_past_r_squared((gens, w) in instance(4, 15)) {
        let s = Semigroup::build(&gens).unwrap();
        let w = WeightVector::new(w);
        let r = s.largest_generator();
        let report = verify_weighted_recurrences(&s, &w, r * r + 3 * r).unwrap();
        prop_assert!(report.within_bound(), "{:?}", report);
    }

    #[test]
    fn unit_weights_reproduce_lengths(gens in prop::collection::btree_set(2i64..=20, 1..=4)) {
        let gens: Vec<i64> = gens.into_iter().collect();
        let s = Semigroup::build(&gens).unwrap();
        let w = WeightVector::unit(s.rank());
        for t in (0..=200).filter(|&t| s.contains(t)) {
            let plain: Vec<BigRational> = length_set(&s, t)
                .unwrap()
                .into_iter()
                .map(|l| BigRational::from_integer((l as i64).into()))
                .collect();
            prop_assert_eq!(weighted_length_set(&s, t, &w).unwrap(), plain);
        }
    }

    #[test]
    fn weighted_deltas_are_multiples_of_min((gens, w) in instance(4, 20)) {
        let s = Semigroup::build(&gens).unwrap();
        let w = WeightVector::new(w);
        let d = min_delta_w(&s, &w).unwrap();
        let brute = delta_w_brute_force(&s, &w, 400).unwrap();
        prop_assert!(brute.iter().all(|x| is_positive_multiple(x, &d)));
        match max_delta_w(&s, &w).unwrap() {
            Some(hi) => {
                prop_assert!(brute.iter().all(|x| *x <= hi));
                prop_assert_eq!(brute.iter().next_back(), Some(&hi));
            }
            None => prop_assert!(brute.is_empty()),
        }
    }

    #[test]
    fn heavy_and_light_generators_can_be_used((gens, w) in instance(3, 12), t in 0i64..=150) {
        let s = Semigroup::build(&gens).unwrap();
        let w = WeightVector::new(w);
        let order = w_ordering(&s, &w).unwrap();
        let (first, last) = (order.first(), order.last());
        let (r1, rk) = (s.generators()[order.first()], s.generators()[order.last()]);
        let zs = factorizations(&s, t);
        let lens: Vec<BigRational> = zs.iter().map(|z| weighted_length(z, &w).unwrap()).collect();
        for (z, lz) in zs.iter().zip(&lens) {
            if z.length() >= r1 as u64 {
                let heavier = zs.iter().zip(&lens).any(|(b, lb)| lb >= lz && b.exponents()[first] > 0);
                prop_assert!(heavier, "t = {}, z = {}", t, z);
            }
            if z.length() >= rk as u64 {
                let lighter = zs.iter().zip(&lens).any(|(b, lb)| lb <= lz && b.exponents()[last] > 0);
                prop_assert!(lighter, "t = {}, z = {}", t, z);
            }
        }
    }
}

use proptest::prelude::*;
use x0cubic_core::bounds::{self, CountMode};
use x0cubic_core::curvedata::INFINITELY_MANY_CUBIC_POINTS;
use x0cubic_core::{numth, EcDb, Rational};

const POOL: [u64; 6] = [2, 3, 5, 7, 11, 13];

proptest! {
    #[test]
    fn ogg_bound_increases_with_p(n in 1u64..5000) {
        let vals: Vec<Rational> = numth::primes_between(2, 60)
            .into_iter()
            .filter(|p| n % p != 0)
            .map(|p| bounds::ogg_lower_exact(n, p).unwrap())
            .collect();
        prop_assert!(vals.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn generic_decision_is_an_integer_comparison(n in 1u64..20000, i in 0usize..6) {
        let p = POOL[i];
        prop_assume!(n % p != 0);
        let e = bounds::excludes_generic(n, p).unwrap();
        let f = numth::factor(n).unwrap();
        // 12 L > 12 U, all in integers
        let lhs = (p - 1) * f.psi_index() + 12 * (1 << f.omega());
        prop_assert_eq!(e.excludes, lhs > 36 * (p + 1) * (p + 1));
        prop_assert_eq!(e.lower, lhs.div_ceil(12));
        prop_assert_eq!(e.excludes, e.lower > e.upper);
    }
}

#[test]
fn exact_mode_dominates_lower_bound_mode() {
    let db = EcDb::bundled();
    for n in 1..=300u64 {
        for class in db.positive_rank_classes_dividing(n).unwrap() {
            for p in POOL.into_iter().filter(|p| n % p != 0) {
                let lower =
                    bounds::excludes_vs_curve(&db, n, &class.class_id, p, CountMode::LowerBound)
                        .unwrap();
                let exact = bounds::excludes_vs_curve(&db, n, &class.class_id, p, CountMode::Exact)
                    .unwrap();
                assert_eq!(lower.upper, exact.upper);
                assert!(
                    exact.lower >= lower.lower,
                    "level {n}, {}, p = {p}",
                    class.class_id
                );
                assert!(exact.excludes || !lower.excludes);
            }
        }
    }
}

#[test]
fn no_exclusion_fires_on_the_yes_levels() {
    let db = EcDb::bundled();
    for n in INFINITELY_MANY_CUBIC_POINTS {
        for p in POOL.into_iter().filter(|p| n % p != 0) {
            assert!(
                !bounds::excludes_generic(n, p).unwrap().excludes,
                "level {n}, p = {p}"
            );
            for class in db.positive_rank_classes_dividing(n).unwrap() {
                for mode in [CountMode::LowerBound, CountMode::Exact] {
                    let e = bounds::excludes_vs_curve(&db, n, &class.class_id, p, mode).unwrap();
                    assert!(!e.excludes, "level {n}, {}, p = {p}", class.class_id);
                }
            }
        }
        for q in numth::factor(n)
            .unwrap()
            .unitary_divisors()
            .into_iter()
            .filter(|&q| q > 1)
        {
            assert!(
                !bounds::castelnuovo_excludes(n, q).unwrap(),
                "level {n}, W_{q}"
            );
        }
    }
}

#[test]
fn scan_is_order_independent() {
    let a = bounds::scan_not_trielliptic(300, 1200, &[2, 3]).unwrap();
    let b = bounds::scan_not_trielliptic(300, 1200, &[3, 2]).unwrap();
    assert_eq!(a, b);
    assert!(a.windows(2).all(|w| w[0] < w[1]));
    assert!(a.iter().all(|n| n % 6 == 0));
}

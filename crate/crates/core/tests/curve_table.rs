//! The bundled curve table against the Hasse bound and the trace formula.

use x0cubic_core::{curvedata, ecdb::EcDb, hecke, numth};

const SMALL_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

#[test]
fn bundled_table_shape() {
    let db = EcDb::bundled();
    assert_eq!(db.len(), 1172);
    assert_eq!(db.classes().count(), 475);
    assert_eq!(db.max_conductor(), 300);
    for c in db.classes() {
        let members: Vec<_> = db
            .records()
            .iter()
            .filter(|r| r.class_id == c.class_id)
            .collect();
        assert_eq!(members.iter().filter(|r| r.is_strong).count(), 1);
        assert!(members.iter().all(|r| r.rank == c.rank));
    }
}

#[test]
fn hasse_bound_for_every_record() {
    let db = EcDb::bundled();
    for rec in db.records() {
        for p in SMALL_PRIMES.into_iter().filter(|p| rec.conductor % p != 0) {
            let n1 = db.curve_point_count(&rec.label, p, 1).unwrap() as i64;
            let n2 = db.curve_point_count(&rec.label, p, 2).unwrap() as i64;
            let p = p as i64;
            let a = p + 1 - n1;
            // |a_p| <= 2 sqrt(p), and the same over F_{p^2} with 2p
            assert!(a * a <= 4 * p, "{} at {p}", rec.label);
            assert!((n2 - (p * p + 1)).abs() <= 2 * p, "{} at {p}^2", rec.label);
            assert_eq!(n2, p * p + 1 - (a * a - 2 * p), "{} at {p}^2", rec.label);
        }
    }
}

/// Tr T_p on the new subspace: sum over M | N of beta(N/M) Tr(T_p, M), with
/// beta multiplicative, beta(p) = -2, beta(p^2) = 1, beta(p^k) = 0 for k > 2.
fn new_trace(n: u64, m: u64) -> i64 {
    let beta = |d: u64| -> i64 {
        numth::factor(d)
            .unwrap()
            .factors()
            .iter()
            .map(|&(_, e)| match e {
                1 => -2,
                2 => 1,
                _ => 0,
            })
            .product()
    };
    numth::divisors(n)
        .into_iter()
        .map(|d| beta(n / d) * hecke::trace_tm(d, m).unwrap().trace)
        .sum()
}

#[test]
fn classes_fit_in_the_new_subspace() {
    let db = EcDb::bundled();
    let mut full = 0;
    for n in 1..=300u64 {
        let classes: Vec<_> = db.classes().filter(|c| c.conductor == n).collect();
        let dim_new = new_trace(n, 1);
        assert!(classes.len() as i64 <= dim_new, "level {n}");
        if classes.len() as i64 != dim_new || classes.is_empty() {
            continue;
        }
        // every newform is rational, so traces are sums of a_p
        full += 1;
        for p in SMALL_PRIMES.into_iter().filter(|p| n % p != 0) {
            let sum: i64 = classes
                .iter()
                .map(|c| p as i64 + 1 - db.curve_point_count(&c.strong_label, p, 1).unwrap() as i64)
                .sum();
            assert_eq!(sum, new_trace(n, p), "level {n}, p = {p}");
        }
    }
    // levels up to 300 whose new subspace is spanned by rational newforms
    assert_eq!(full, 86);
}

#[test]
fn genus_one_levels_match_their_curves() {
    let db = EcDb::bundled();
    for n in curvedata::ELLIPTIC_LEVELS {
        let strong: Vec<_> = db.classes().filter(|c| c.conductor == n).collect();
        assert_eq!(strong.len(), 1, "level {n}");
        let label = &strong[0].strong_label;
        for p in numth::primes_between(2, 50)
            .into_iter()
            .filter(|p| n % p != 0)
        {
            let count = db.curve_point_count(label, p, 1).unwrap() as i64;
            assert_eq!(
                hecke::trace_tm(n, p).unwrap().trace,
                p as i64 + 1 - count,
                "level {n}, p = {p}"
            );
            assert_eq!(hecke::point_count(n, p, 1).unwrap() as i64, count);
        }
    }
}

#[test]
fn truncated_table_reports_coverage() {
    let text: String = x0cubic_core::ecdb::BUNDLED_DATA
        .lines()
        .filter(|l| {
            l.starts_with('#')
                || l.split(',').nth(1).and_then(|c| c.parse::<u64>().ok()) <= Some(100)
        })
        .map(|l| format!("{l}\n"))
        .collect();
    let db = EcDb::load(text.as_bytes()).unwrap();
    assert_eq!(db.max_conductor(), 100);
    assert!(db.positive_rank_classes_dividing(86).is_ok());
    assert_eq!(
        db.positive_rank_classes_dividing(202).unwrap_err(),
        x0cubic_core::Error::MissingConductor {
            conductor: 101,
            covered: 100
        }
    );
}

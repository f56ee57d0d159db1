//! Inequalities that rule out degree-3 maps from X_0(N) to elliptic curves:
//! Ogg's lower bound on F_{p^2}-points, the Hasse-type upper bound for a
//! trielliptic curve, and Castelnuovo's genus inequality.
//!
//! Every decision is an exact integer or rational comparison.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvedata;
use crate::ecdb::EcDb;
use crate::error::{Error, Result};
use crate::hecke;
use crate::numth::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BoundKind {
    /// Ogg's bound against `3 (p + 1)^2`.
    GenericTrielliptic,
    /// Ogg's bound against three times the F_{p^2}-count of a specific curve.
    SpecificCurve { label: String },
    /// The exact F_{p^2}-count of X_0(N) against the same curve bound.
    ExactCountVsCurve { label: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    LowerBound,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEvidence {
    pub level: u64,
    pub prime: u64,
    /// Ceiling of Ogg's bound, or the exact point count for the exact kind.
    pub lower: u64,
    pub upper: u64,
    pub kind: BoundKind,
    pub excludes: bool,
}

fn check_good(level: u64, p: u64) -> Result<()> {
    if level == 0 {
        return Err(Error::NotPositive(0));
    }
    if !numth::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if level.is_multiple_of(p) {
        return Err(Error::BadPrime { p, modulus: level });
    }
    Ok(())
}

/// Ogg's lower bound `(p - 1)/12 * psi(N) + 2^omega(N)` on `|X_0(N)(F_{p^2})|`,
/// exactly.
pub fn ogg_lower_exact(level: u64, p: u64) -> Result<Rational> {
    check_good(level, p)?;
    let f = numth::factor(level)?;
    Ok(Rational::new((p as i64 - 1) * f.psi_index() as i64, 12)
        + Rational::from_integer(1i64 << f.omega()))
}

/// Ceiling of [`ogg_lower_exact`]. Since point counts are integers, a count
/// lies below the exact bound iff it lies below the ceiling.
pub fn ogg_lower(level: u64, p: u64) -> Result<u64> {
    Ok(ogg_lower_exact(level, p)?.ceil().to_integer() as u64)
}

/// `3 (p + 1)^2`: a degree-3 cover of an elliptic curve over F_p has at most
/// three times `p^2 + 1 + 2p` points over F_{p^2}.
pub fn trielliptic_upper(p: u64) -> Result<u64> {
    if !numth::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(3 * (p + 1) * (p + 1))
}

pub fn excludes_generic(level: u64, p: u64) -> Result<BoundEvidence> {
    let exact = ogg_lower_exact(level, p)?;
    let upper = trielliptic_upper(p)?;
    Ok(BoundEvidence {
        level,
        prime: p,
        lower: exact.ceil().to_integer() as u64,
        upper,
        kind: BoundKind::GenericTrielliptic,
        excludes: exact > Rational::from_integer(upper as i64),
    })
}

/// Compares X_0(N) with a degree-3 map to a curve in `class_id`.
///
/// Any such map factors through the strong Weil curve up to isogeny, and
/// isogenous curves share point counts, so the strong curve's count bounds
/// the image.
pub fn excludes_vs_curve(
    db: &EcDb,
    level: u64,
    class_id: &str,
    p: u64,
    mode: CountMode,
) -> Result<BoundEvidence> {
    check_good(level, p)?;
    let class = db.class(class_id)?;
    let upper = 3 * db.curve_point_count(&class.strong_label, p, 2)?;
    let label = class.strong_label.clone();
    let (lower, excludes, kind) = match mode {
        CountMode::LowerBound => {
            let exact = ogg_lower_exact(level, p)?;
            (
                exact.ceil().to_integer() as u64,
                exact > Rational::from_integer(upper as i64),
                BoundKind::SpecificCurve { label },
            )
        }
        CountMode::Exact => {
            let count = hecke::point_count(level, p, 2)?;
            (count, count > upper, BoundKind::ExactCountVsCurve { label })
        }
    };
    Ok(BoundEvidence {
        level,
        prime: p,
        lower,
        upper,
        kind,
        excludes,
    })
}

/// Castelnuovo's bound `n1 g1 + n2 g2 + (n1 - 1)(n2 - 1)` on the genus of a
/// curve whose function field is the compositum of subfields of degrees
/// `n1`, `n2` and genera `g1`, `g2`.
pub fn castelnuovo_bound(n1: u64, g1: u64, n2: u64, g2: u64) -> u64 {
    n1 * g1 + n2 * g2 + (n1 - 1) * (n2 - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CastelnuovoEvidence {
    pub level: u64,
    pub q: u64,
    pub genus: u64,
    pub quotient_genus: u64,
    pub fixed_points: u64,
    pub threshold: u64,
    pub excludes: bool,
}

/// The quotient map by W_Q (degree 2) and a hypothetical degree-3 map to an
/// elliptic curve have coprime degrees, so together they generate the
/// function field of X_0(N).
pub fn castelnuovo_evidence(level: u64, q: u64) -> Result<CastelnuovoEvidence> {
    let fixed_points = curvedata::al_fixed_points(level, q)?;
    let quotient_genus = curvedata::al_quotient_genus(level, q)?;
    let genus = curvedata::genus(level);
    let threshold = castelnuovo_bound(2, quotient_genus, 3, 1);
    Ok(CastelnuovoEvidence {
        level,
        q,
        genus,
        quotient_genus,
        fixed_points,
        threshold,
        excludes: genus > threshold,
    })
}

pub fn castelnuovo_excludes(level: u64, q: u64) -> Result<bool> {
    Ok(castelnuovo_evidence(level, q)?.excludes)
}

/// Levels in `[start, end]` for which no prime of `pool` makes
/// [`excludes_generic`] fire. Output is sorted.
pub fn scan_not_trielliptic(start: u64, end: u64, pool: &[u64]) -> Result<Vec<u64>> {
    if start < 300 || start > end {
        return Err(Error::ScanRange { start, end });
    }
    if let Some(&p) = pool.iter().find(|&&p| !numth::is_prime(p)) {
        return Err(Error::NotPrime(p));
    }
    let mut survivors: Vec<u64> = (start..=end)
        .into_par_iter()
        .filter(|&n| {
            !pool
                .iter()
                .any(|&p| n % p != 0 && excludes_generic(n, p).is_ok_and(|e| e.excludes))
        })
        .collect();
    survivors.sort_unstable();
    Ok(survivors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ogg_examples() {
        assert_eq!(ogg_lower(215, 2), Ok(26));
        assert_eq!(ogg_lower(86, 3), Ok(26));
        assert_eq!(ogg_lower(1, 2), Ok(2));
        assert_eq!(ogg_lower_exact(1, 2), Ok(Rational::new(13, 12)));
        assert_eq!(ogg_lower(86, 2), Err(Error::BadPrime { p: 2, modulus: 86 }));
    }

    #[test]
    fn upper_examples() {
        assert_eq!(trielliptic_upper(2), Ok(27));
        assert_eq!(trielliptic_upper(3), Ok(48));
        assert_eq!(trielliptic_upper(7), Ok(192));
        assert_eq!(trielliptic_upper(8), Err(Error::NotPrime(8)));
    }

    #[test]
    fn generic_examples() {
        let e = excludes_generic(301, 2).unwrap();
        assert!(e.excludes);
        assert_eq!(e.lower, 34);
        assert!(!excludes_generic(86, 3).unwrap().excludes);
        assert!(!excludes_generic(11, 2).unwrap().excludes);
    }

    #[test]
    fn curve_examples() {
        let db = EcDb::bundled();
        let e = excludes_vs_curve(&db, 215, "43A", 2, CountMode::LowerBound).unwrap();
        assert_eq!((e.lower, e.upper, e.excludes), (26, 15, true));
        let e = excludes_vs_curve(&db, 86, "43A", 3, CountMode::Exact).unwrap();
        assert_eq!((e.lower, e.upper, e.excludes), (40, 36, true));
        let e = excludes_vs_curve(&db, 86, "43A", 3, CountMode::LowerBound).unwrap();
        assert_eq!((e.lower, e.upper, e.excludes), (26, 36, false));
    }

    #[test]
    fn castelnuovo_examples() {
        assert_eq!(castelnuovo_bound(2, 4, 3, 1), 13);
        let e = castelnuovo_evidence(159, 159).unwrap();
        assert_eq!(
            (e.genus, e.quotient_genus, e.threshold, e.excludes),
            (17, 4, 13, true)
        );
        let e = castelnuovo_evidence(158, 79).unwrap();
        assert_eq!(
            (e.genus, e.quotient_genus, e.threshold, e.excludes),
            (19, 5, 15, true)
        );
        for q in [2, 43, 86] {
            assert!(!castelnuovo_excludes(86, q).unwrap(), "W_{q} on X_0(86)");
        }
    }

    #[test]
    fn scan_examples() {
        assert_eq!(scan_not_trielliptic(301, 301, &[2]), Ok(vec![]));
        assert_eq!(scan_not_trielliptic(300, 300, &[7]), Ok(vec![]));
        assert_eq!(scan_not_trielliptic(300, 300, &[2]), Ok(vec![300]));
        assert_eq!(
            scan_not_trielliptic(299, 400, &[2]),
            Err(Error::ScanRange {
                start: 299,
                end: 400
            })
        );
    }
}

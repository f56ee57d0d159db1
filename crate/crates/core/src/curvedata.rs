//! Invariants of X_0(N) and its Atkin-Lehner quotients, plus the known
//! gonality classifications of X_0(N) as embedded constants.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numth::{self, kronecker, Factorization};

/// X_0(N) is rational (genus 0) exactly for these levels (Ogg).
pub const RATIONAL_LEVELS: [u64; 15] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 25];

/// X_0(N) is elliptic (genus 1) exactly for these levels.
pub const ELLIPTIC_LEVELS: [u64; 12] = [11, 14, 15, 17, 19, 20, 21, 24, 27, 32, 36, 49];

/// Hyperelliptic X_0(N) (Ogg, "Hyperelliptic modular curves", 1974).
pub const HYPERELLIPTIC_LEVELS: [u64; 19] = [
    22, 23, 26, 28, 29, 30, 31, 33, 35, 37, 39, 40, 41, 46, 47, 48, 50, 59, 71,
];

/// Bielliptic X_0(N) (Bars, "Bielliptic modular curves", 1999).
pub const BIELLIPTIC_LEVELS: [u64; 41] = [
    22, 26, 28, 30, 33, 34, 35, 37, 38, 39, 40, 42, 43, 44, 45, 48, 50, 51, 53, 54, 55, 56, 60, 61,
    62, 63, 64, 65, 69, 72, 75, 79, 81, 83, 89, 92, 94, 95, 101, 119, 131,
];

/// Gon(X_0(N)) = 3 (Hasegawa-Shimura, "Trigonal modular curves", 1999).
pub const GONALITY_THREE_LEVELS: [u64; 10] = [34, 38, 43, 44, 45, 53, 54, 61, 64, 81];

/// Levels of gonality 3 whose trigonal map can be taken over Q. Together with
/// every level of genus at most 2 these are the levels trigonal over Q.
pub const TRIGONAL_OVER_Q_GONALITY_THREE: [u64; 6] = [34, 43, 45, 54, 64, 81];

/// The levels for which X_0(N) has infinitely many cubic points:
/// 1-29, 31, 32, 34, 36, 37, 43, 45, 49, 50, 54, 64, 81.
pub const INFINITELY_MANY_CUBIC_POINTS: [u64; 41] = [
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26,
    27, 28, 29, 31, 32, 34, 36, 37, 43, 45, 49, 50, 54, 64, 81,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurveInvariants {
    pub level: u64,
    pub psi: u64,
    pub nu2: u64,
    pub nu3: u64,
    pub cusps: u64,
    pub genus: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassificationFlags {
    pub rational: bool,
    pub elliptic: bool,
    pub hyperelliptic: bool,
    pub bielliptic: bool,
    pub gonality3: bool,
    pub trigonal_over_q: bool,
}

fn elliptic_point_counts(f: &Factorization) -> (u64, u64) {
    let nu2 = if f.valuation(2) >= 2 {
        0
    } else {
        f.primes()
            .filter(|&p| p != 2)
            .map(|p| (1 + kronecker(-1, p as i64)) as u64)
            .product()
    };
    let nu3 = if f.valuation(3) >= 2 {
        0
    } else {
        f.primes()
            .filter(|&p| p != 3)
            .map(|p| (1 + kronecker(-3, p as i64)) as u64)
            .product()
    };
    (nu2, nu3)
}

fn cusp_count(f: &Factorization) -> u64 {
    let n = f.n();
    f.divisors()
        .into_iter()
        .map(|d| numth::euler_phi(d.gcd(&(n / d))))
        .sum()
}

pub fn invariants(level: u64) -> Result<CurveInvariants> {
    let f = numth::factor(level)?;
    let psi = f.psi_index();
    let (nu2, nu3) = elliptic_point_counts(&f);
    let cusps = cusp_count(&f);
    // 12 g = 12 + psi - 3 nu2 - 4 nu3 - 6 cusps
    let twelve_g = 12 + psi as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * cusps as i64;
    if twelve_g < 0 || twelve_g % 12 != 0 {
        return Err(Error::Inconsistent(format!(
            "genus formula for level {level} gives {twelve_g}/12"
        )));
    }
    Ok(CurveInvariants {
        level,
        psi,
        nu2,
        nu3,
        cusps,
        genus: (twelve_g / 12) as u64,
    })
}

/// Genus of X_0(N). Panics on `level = 0`.
pub fn genus(level: u64) -> u64 {
    invariants(level)
        .expect("genus of X_0(N) is defined for N >= 1")
        .genus
}

pub fn flags(level: u64) -> Result<ClassificationFlags> {
    let g = invariants(level)?.genus;
    Ok(ClassificationFlags {
        rational: RATIONAL_LEVELS.contains(&level),
        elliptic: ELLIPTIC_LEVELS.contains(&level),
        hyperelliptic: HYPERELLIPTIC_LEVELS.contains(&level),
        bielliptic: BIELLIPTIC_LEVELS.contains(&level),
        gonality3: GONALITY_THREE_LEVELS.contains(&level),
        trigonal_over_q: g <= 2 || TRIGONAL_OVER_Q_GONALITY_THREE.contains(&level),
    })
}

fn check_unitary(level: u64, q: u64) -> Result<Factorization> {
    if level == 0 {
        return Err(Error::NotPositive(0));
    }
    if q <= 1 || !level.is_multiple_of(q) || q.gcd(&(level / q)) != 1 {
        return Err(Error::NotUnitaryDivisor { level, q });
    }
    numth::factor(level / q)
}

/// Number of optimal embeddings, up to conjugacy, of the imaginary quadratic
/// order of discriminant `d` into an Eichler order of level `p^k`.
///
/// When `p` divides the conductor of the order (here only `p = 2` with
/// conductor exactly 2) the count is read off the Bruhat-Tits tree: paths of
/// length `k` inside the 1-neighbourhood of the maximal order's fixed set.
fn embedding_count(d: i64, p: u64, k: u32) -> u64 {
    let p2 = (p * p) as i64;
    if d % p2 == 0 && numth::is_negative_discriminant(d / p2) {
        debug_assert_eq!(p, 2);
        let split = kronecker(d / 4, 2) == 1;
        return match (split, k) {
            (_, 1) => 2,
            (true, 2) => 4,
            (true, _) => 6,
            (false, 2) => 2,
            (false, _) => 0,
        };
    }
    match kronecker(d, p as i64) {
        1 => 2,
        -1 => 0,
        _ => u64::from(k == 1),
    }
}

fn local_product(d: i64, rest: &Factorization) -> u64 {
    rest.factors()
        .iter()
        .map(|&(p, k)| embedding_count(d, p, k))
        .product()
}

/// Number of fixed points of the Atkin-Lehner involution W_Q on X_0(N),
/// cusps included.
///
/// Fixed points off the cusps are CM points by orders containing an element
/// of norm Q in the W_Q coset: `Z[sqrt(-Q)]` (discriminant `-4Q`), and
/// `Z[(1 + sqrt(-Q))/2]` when `Q = 3 mod 4`. Each contributes its class
/// number times local embedding counts over the primes of `N/Q`. W_2 also
/// fixes the CM points by `Z[i]` (elements of trace 2), and W_4 fixes every
/// cusp whose denominator has 2-part exactly 2.
pub fn al_fixed_points(level: u64, q: u64) -> Result<u64> {
    let rest = check_unitary(level, q)?;
    let h = |d: i64| numth::class_number(d).expect("negative discriminant");
    let qi = q as i64;
    let mut count = h(-4 * qi) * local_product(-4 * qi, &rest);
    if q % 4 == 3 {
        count += h(-qi) * local_product(-qi, &rest);
    }
    if q == 2 {
        count += local_product(-4, &rest);
    }
    if q == 4 {
        count += cusp_count(&rest);
    }
    Ok(count)
}

/// Genus of X_0(N)/W_Q by Riemann-Hurwitz.
pub fn al_quotient_genus(level: u64, q: u64) -> Result<u64> {
    let fixed = al_fixed_points(level, q)?;
    let g = genus(level);
    let numerator = (2 * g + 2) as i64 - fixed as i64;
    if numerator < 0 || numerator % 4 != 0 {
        return Err(Error::Inconsistent(format!(
            "Riemann-Hurwitz for W_{q} on X_0({level}): (2*{g} + 2 - {fixed})/4 is not a non-negative integer"
        )));
    }
    Ok((numerator / 4) as u64)
}

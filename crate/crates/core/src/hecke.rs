//! Hecke traces on weight-2 cusp forms for Gamma_0(N), and the point counts
//! and local zeta numerators of X_0(N) they determine.
//!
//! Traces come from the Eichler-Selberg trace formula in the form given by
//! Cohen (weight 2, trivial character): for `gcd(m, N) = 1`,
//!
//! ```text
//! Tr T_m = A1 + A2 + A3 + A4
//! A1 = psi(N)/12                                  if m is a square, else 0
//! A2 = -1/2 sum_{t^2 < 4m} sum_f h_w((t^2 - 4m)/f^2) mu(t, f, N)
//! A3 = -1/2 sum_{d | m} min(d, m/d) sum_{c | N, gcd(c, N/c) | d - m/d} phi(gcd(c, N/c))
//! A4 = sigma(m)
//! ```
//!
//! with `mu(t, f, N) = psi(N)/psi(N/N_f) * #{x mod N : x^2 - t x + m = 0 mod N N_f}`
//! and `N_f = gcd(N, f)`.

use std::collections::HashMap;

use num_integer::Integer;
use serde::Serialize;

use crate::curvedata;
use crate::error::{Error, Result};
use crate::numth::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceValue {
    pub level: u64,
    pub index: u64,
    pub trace: i64,
}

/// Numerator `P(t)` of `Z(X_0(N)_p, t) = P(t) / ((1 - t)(1 - p t))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalZeta {
    pub level: u64,
    pub prime: u64,
    /// Coefficients of `P(t)` from the constant term up; `P(0) = 1`, degree `2g`.
    pub numerator_coeffs: Vec<i64>,
}

impl LocalZeta {
    pub fn genus(&self) -> usize {
        (self.numerator_coeffs.len() - 1) / 2
    }

    /// `|X_0(N)_p(F_{p^n})|` read back from the zeta function.
    pub fn point_count(&self, n: u32) -> i64 {
        let p = self.prime as i64;
        p.pow(n) + 1 - self.power_sums(n as usize)[n as usize - 1]
    }

    /// Power sums `s_k = sum(alpha_i^k)` of the inverse roots of `P`, `k = 1..=n`.
    fn power_sums(&self, n: usize) -> Vec<i64> {
        let c = &self.numerator_coeffs;
        let coeff = |i: usize| c.get(i).copied().unwrap_or(0);
        // Newton: s_k = -k c_k - sum_{j=1}^{k-1} c_j s_{k-j}
        let mut s = Vec::with_capacity(n);
        for k in 1..=n {
            let mut v = -(k as i64) * coeff(k);
            for j in 1..k {
                v -= coeff(j) * s[k - j - 1];
            }
            s.push(v);
        }
        s
    }
}

/// Memoised weighted class numbers `h_w(d)`.
#[derive(Default)]
struct ClassNumberCache {
    values: HashMap<i64, Rational>,
}

impl ClassNumberCache {
    fn weighted(&mut self, d: i64) -> Rational {
        *self
            .values
            .entry(d)
            .or_insert_with(|| numth::weighted_class_number(d).expect("negative discriminant"))
    }
}

fn check_coprime(level: u64, m: u64) -> Result<()> {
    if level == 0 {
        return Err(Error::NotPositive(0));
    }
    if m == 0 {
        return Err(Error::NotPositive(0));
    }
    if level.gcd(&m) != 1 {
        return Err(Error::NotCoprime { level, m });
    }
    Ok(())
}

/// Solutions `x` in `[0, N)` of `x^2 - t x + m = 0 (mod N * nf)`.
fn quadratic_root_count(level: u64, nf: u64, t: i64, m: u64) -> u64 {
    let modulus = (level * nf) as i128;
    (0..level as i128)
        .filter(|&x| (x * x - t as i128 * x + m as i128).rem_euclid(modulus) == 0)
        .count() as u64
}

fn elliptic_term(level: u64, m: u64, cache: &mut ClassNumberCache) -> Rational {
    let psi_n = numth::psi_index(level) as i64;
    let four_m = 4 * m as i64;
    let t_max = numth::isqrt(4 * m) as i64;
    let mut sum = Rational::from_integer(0);
    for t in -t_max..=t_max {
        let disc = t * t - four_m;
        if disc >= 0 {
            continue;
        }
        let mut f = 1i64;
        while f * f <= -disc {
            if disc % (f * f) == 0 && numth::is_negative_discriminant(disc / (f * f)) {
                let nf = level.gcd(&(f as u64));
                let index_ratio = psi_n / numth::psi_index(level / nf) as i64;
                let roots = quadratic_root_count(level, nf, t, m) as i64;
                if roots != 0 {
                    sum += cache.weighted(disc / (f * f)) * (index_ratio * roots);
                }
            }
            f += 1;
        }
    }
    -sum / 2
}

fn hyperbolic_term(level: u64, m: u64) -> Rational {
    let level_divisors = numth::divisors(level);
    let mut sum = 0i64;
    for d in numth::divisors(m) {
        let e = m / d;
        let diff = d.abs_diff(e);
        let inner: u64 = level_divisors
            .iter()
            .map(|&c| c.gcd(&(level / c)))
            .filter(|&g| diff % g == 0)
            .map(numth::euler_phi)
            .sum();
        sum += (d.min(e) * inner) as i64;
    }
    Rational::new(-sum, 2)
}

fn trace_with_cache(level: u64, m: u64, cache: &mut ClassNumberCache) -> i64 {
    let mut total = Rational::from_integer(numth::sigma1(m) as i64);
    if numth::is_square(m) {
        total += Rational::new(numth::psi_index(level) as i64, 12);
    }
    total += elliptic_term(level, m, cache);
    total += hyperbolic_term(level, m);
    assert!(
        total.is_integer(),
        "trace formula gave a non-integer {total} for T_{m} on level {level}"
    );
    total.to_integer()
}

/// Trace of the Hecke operator `T_m` on weight-2 cusp forms for Gamma_0(N).
pub fn trace_tm(level: u64, m: u64) -> Result<TraceValue> {
    check_coprime(level, m)?;
    let trace = trace_with_cache(level, m, &mut ClassNumberCache::default());
    Ok(TraceValue {
        level,
        index: m,
        trace,
    })
}

fn check_good_prime(level: u64, p: u64) -> Result<()> {
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

/// `|X_0(N)_p(F_{p^n})|` for `n` in `{1, 2}`.
pub fn point_count(level: u64, p: u64, n: u32) -> Result<u64> {
    check_good_prime(level, p)?;
    let pi = p as i64;
    let count = match n {
        1 => pi + 1 - trace_tm(level, p)?.trace,
        2 => {
            let g = curvedata::genus(level) as i64;
            pi * pi + 1 + pi * g - trace_tm(level, p * p)?.trace
        }
        _ => return Err(Error::UnsupportedDegree(n)),
    };
    if count < 0 {
        return Err(Error::Inconsistent(format!(
            "negative point count {count} for X_0({level}) over F_{p}^{n}"
        )));
    }
    Ok(count as u64)
}

/// Numerator of the zeta function of `X_0(N)` reduced at a good prime `p`.
///
/// The power sums of the Frobenius eigenvalues are
/// `s_k = Tr T_{p^k} - p Tr T_{p^{k-2}}` (with `Tr T_1 = g`), the first `g`
/// coefficients follow from Newton's identities and the rest from the
/// functional equation `c_{2g-k} = p^{g-k} c_k`.
///
/// The largest trace needed is `Tr T_{p^g}`, whose class-number sum runs over
/// discriminants up to `4 p^g`; cost grows accordingly.
pub fn local_zeta(level: u64, p: u64) -> Result<LocalZeta> {
    check_good_prime(level, p)?;
    let g = curvedata::genus(level) as usize;
    let pi = p as i64;
    let mut cache = ClassNumberCache::default();
    // traces[k] = Tr T_{p^k}, k = 0..=g
    let mut traces = Vec::with_capacity(g + 1);
    let mut pk = 1u64;
    for _ in 0..=g {
        traces.push(trace_with_cache(level, pk, &mut cache));
        pk *= p;
    }
    let power_sums: Vec<i64> = (1..=g)
        .map(|k| traces[k] - if k >= 2 { pi * traces[k - 2] } else { 0 })
        .collect();

    let mut coeffs = vec![0i64; 2 * g + 1];
    coeffs[0] = 1;
    for k in 1..=g {
        // k c_k = -sum_{j=1}^{k} s_j c_{k-j}
        let acc: i64 = (1..=k).map(|j| power_sums[j - 1] * coeffs[k - j]).sum();
        if acc % k as i64 != 0 {
            return Err(Error::Inconsistent(format!(
                "zeta coefficient {k} of X_0({level}) at {p} is not integral"
            )));
        }
        coeffs[k] = -acc / k as i64;
    }
    for k in 0..g {
        coeffs[2 * g - k] = pi.pow((g - k) as u32) * coeffs[k];
    }
    Ok(LocalZeta {
        level,
        prime: p,
        numerator_coeffs: coeffs,
    })
}

//! Exact elementary number theory.
//!
//! Everything here works over the integers (or exact rationals). Levels of
//! interest are far below `10^6`, so factorization is plain trial division.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = num_rational::Ratio<i64>;

/// Prime factorization of a positive integer, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs sorted by prime.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Exponent of `p` in `n` (zero when `p` does not divide `n`).
    pub fn valuation(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    pub fn psi_index(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p + 1) * p.pow(e - 1))
            .product()
    }

    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let current = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..current {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Divisors `q` with `gcd(q, n/q) = 1`, ascending (includes 1 and n).
    pub fn unitary_divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let pe = p.pow(e);
            let current = divs.len();
            for i in 0..current {
                divs.push(divs[i] * pe);
            }
        }
        divs.sort_unstable();
        divs
    }
}

pub fn factor(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::NotPositive(0));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { n, factors })
}

fn factor_positive(n: u64) -> Factorization {
    factor(n).expect("argument must be positive")
}

/// Euler's totient. Panics on `n = 0`.
pub fn euler_phi(n: u64) -> u64 {
    factor_positive(n).euler_phi()
}

/// Index of Gamma_0(n) in SL_2(Z): `n * prod_{p | n} (1 + 1/p)`. Panics on `n = 0`.
pub fn psi_index(n: u64) -> u64 {
    factor_positive(n).psi_index()
}

/// Number of distinct prime divisors. Panics on `n = 0`.
pub fn omega(n: u64) -> u32 {
    factor_positive(n).omega()
}

pub fn divisors(n: u64) -> Vec<u64> {
    factor_positive(n).divisors()
}

pub fn sigma1(n: u64) -> u64 {
    factor_positive(n)
        .factors()
        .iter()
        .map(|&(p, e)| (p.pow(e + 1) - 1) / (p - 1))
        .product()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes `p` with `lo <= p <= hi`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    n.isqrt()
}

pub fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Kronecker symbol `(a/n)` over the full integer domain.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut sign = 1i8;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    // strip factors of two from n
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut twos = 0;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos % 2 == 1 {
        let r = a.rem_euclid(8);
        if r == 3 || r == 5 {
            sign = -sign;
        }
    }
    // n is now odd and positive: Jacobi symbol
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// True for negative `d` congruent to 0 or 1 mod 4.
pub fn is_negative_discriminant(d: i64) -> bool {
    d < 0 && matches!(d.rem_euclid(4), 0 | 1)
}

/// Visit every reduced positive-definite form `(a, b, c)` of discriminant `d`.
///
/// Reduced means `|b| <= a <= c` with `b >= 0` whenever `|b| = a` or `a = c`.
/// Imprimitive forms are included; callers filter on `gcd(a, b, c)`.
fn for_each_reduced_form(d: i64, mut visit: impl FnMut(i64, i64, i64)) {
    let abs_d = -d;
    let mut a = 1i64;
    // a <= sqrt(|d| / 3)
    while 3 * a * a <= abs_d {
        let b_start = if (a + d).rem_euclid(2) == 0 {
            -a
        } else {
            -a + 1
        };
        let mut b = b_start;
        while b <= a {
            let num = b * b - d;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                let on_boundary = b.abs() == a || a == c;
                if c >= a && (!on_boundary || b >= 0) {
                    visit(a, b, c);
                }
            }
            b += 2;
        }
        a += 1;
    }
}

/// Class number `h(d)` of the imaginary quadratic order of discriminant `d`,
/// by counting reduced primitive forms.
pub fn class_number(d: i64) -> Result<u64> {
    if !is_negative_discriminant(d) {
        return Err(Error::InvalidDiscriminant(d));
    }
    let mut h = 0u64;
    for_each_reduced_form(d, |a, b, c| {
        if a.gcd(&b).gcd(&c) == 1 {
            h += 1;
        }
    });
    Ok(h)
}

/// `h(d) / (w(d)/2)`: the class number with the classes of `x^2+y^2` and
/// `x^2+xy+y^2` weighted by 1/2 and 1/3.
pub fn weighted_class_number(d: i64) -> Result<Rational> {
    let h = class_number(d)? as i64;
    Ok(match d {
        -3 => Rational::new(h, 3),
        -4 => Rational::new(h, 2),
        _ => Rational::from_integer(h),
    })
}

/// Hurwitz class number `H(n)`, with `H(0) = -1/12`.
pub fn hurwitz_class_number(n: u64) -> Rational {
    if n == 0 {
        return Rational::new(-1, 12);
    }
    if !matches!(n % 4, 0 | 3) {
        return Rational::from_integer(0);
    }
    let d = -(n as i64);
    // every reduced form counts, weighted by its automorphisms
    let mut twelfths = 0i64;
    for_each_reduced_form(d, |a, b, c| {
        twelfths += if a == b && b == c {
            4
        } else if b == 0 && a == c {
            6
        } else {
            12
        };
    });
    Rational::new(twelfths, 12)
}

//! Small integer and rational helpers shared by every module.

use std::collections::BTreeMap;

use num_integer::{Integer, Roots};
use num_prime::nt_funcs::{factorize128, is_prime64};
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational numbers. All quantities in this crate are small enough for
/// 128-bit numerators and denominators; anything that is not (Hensel lifts)
/// goes through `num-bigint`.
pub type Rational = Ratio<i128>;

pub fn rat(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

pub fn int(n: i128) -> Rational {
    Rational::from_integer(n)
}

pub fn is_prime(n: u64) -> bool {
    is_prime64(n)
}

/// Largest power of `l` dividing `x`, or `None` for `x = 0`.
pub fn ord_int(x: i128, l: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let l = l as i128;
    let mut x = x;
    let mut v = 0;
    while x % l == 0 {
        x /= l;
        v += 1;
    }
    Some(v)
}

/// Strips every factor of `l` from `x`, returning `(x / l^v, v)`.
pub fn split_off(x: i128, l: u64) -> (i128, u32) {
    let v = ord_int(x, l).unwrap_or(0);
    (x / (l as i128).pow(v), v)
}

pub fn is_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = n.sqrt();
    r * r == n
}

pub fn isqrt(n: i128) -> i128 {
    n.sqrt()
}

/// Prime factorization of `|n|`. Trial division handles the small primes and
/// `num-prime` (Pollard rho / SQUFOF) finishes the cofactor.
pub fn factor(n: i128) -> Result<BTreeMap<u64, u32>> {
    if n == 0 {
        return Err(Error::InvalidInput("cannot factor zero".into()));
    }
    let mut rest = n.unsigned_abs();
    let mut out = BTreeMap::new();
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            out.insert(p as u64, e);
        }
    }
    if rest > 1 {
        for (p, e) in factorize128(rest) {
            let p = u64::try_from(p)
                .map_err(|_| Error::Resource(format!("prime factor {p} of {n} exceeds 64 bits")))?;
            *out.entry(p).or_insert(0) += e as u32;
        }
    }
    Ok(out)
}

pub fn prime_divisors(n: i128) -> Result<Vec<u64>> {
    Ok(factor(n)?.into_keys().collect())
}

pub fn is_squarefree(n: i128) -> Result<bool> {
    Ok(factor(n)?.values().all(|&e| e == 1))
}

pub fn gcd(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// `l`-adic valuation of a nonzero rational.
pub fn ord_rational(x: &Rational, l: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let num = ord_int(*x.numer(), l).unwrap() as i64;
    let den = ord_int(*x.denom(), l).unwrap() as i64;
    Some(num - den)
}

/// Renders a rational as `"n"` or `"n/d"`.
pub fn rational_string(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i128 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(rat(n.trim().parse().ok()?, d))
        }
        None => Some(int(s.trim().parse().ok()?)),
    }
}

pub fn to_u64(x: i128) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::InvalidInput(format!("{x} is not a nonnegative 64-bit integer")))
}

pub fn abs(x: i128) -> i128 {
    x.abs()
}

pub fn rational_abs(x: &Rational) -> Rational {
    x.abs()
}

//! Rational p-adic primitives: residue symbols, Hilbert symbols, valuations,
//! Hensel square roots and local square tests.
//!
//! Everything here is exact. Residues modulo `l^k` are `BigUint` because the
//! modulus outgrows 128 bits quickly for moderately large `l`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{is_prime, ord_rational, Rational};
use crate::error::{bail_input, Result};

/// An `l`-adic valuation; `Infinity` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "+inf"),
        }
    }
}

/// A place of Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Place {
    Prime(u64),
    Infinity,
}

/// `ord_l(x)` for a rational `x`.
pub fn ord(x: &Rational, l: u64) -> Valuation {
    match ord_rational(x, l) {
        Some(v) => Valuation::Finite(v),
        None => Valuation::Infinity,
    }
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    // operands stay below 2^64, so the product fits
    (a * b) % m
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn residue(a: i128, p: u64) -> u128 {
    a.rem_euclid(p as i128) as u128
}

/// Reduces the `l`-unit `num/den` modulo the machine-sized prime `l`.
fn unit_residue_small(x: &Rational, l: u64) -> u128 {
    let p = l as u128;
    let n = residue(*x.numer(), l);
    let d = residue(*x.denom(), l);
    mul_mod(n, pow_mod(d, p - 2, p), p)
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: i128, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        bail_input!("legendre symbol needs an odd prime modulus, got {p}");
    }
    Ok(legendre_unchecked(residue(a, p), p))
}

fn legendre_unchecked(a: u128, p: u64) -> i8 {
    let p = p as u128;
    if a % p == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

fn jacobi(a: i128, n: u128) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i128) as u128;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(a/n)`, the multiplicative extension of the Jacobi
/// symbol to all nonzero `n`.
pub fn kronecker(a: i128, n: i128) -> Result<i8> {
    if n == 0 {
        bail_input!("kronecker symbol (a/0) is undefined");
    }
    let mut sign = 1i8;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    let v = n.trailing_zeros();
    n >>= v;
    if v > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
    }
    Ok(sign * jacobi(a, n as u128))
}

/// Splits `x = l^v * u` with `u` an `l`-unit.
fn unit_part(x: &Rational, l: u64) -> (i64, Rational) {
    let v = ord_rational(x, l).expect("nonzero");
    let lp = Rational::from_integer(l as i128);
    let u = if v >= 0 {
        x / lp.pow(v as i32)
    } else {
        x * lp.pow((-v) as i32)
    };
    (v, u)
}

/// Odd residue of a 2-adic unit rational modulo 8.
fn unit_mod8(u: &Rational) -> u8 {
    // odd squares are 1 mod 8, so den^{-1} = den mod 8
    ((u.numer().rem_euclid(8) * u.denom().rem_euclid(8)) % 8) as u8
}

/// Hilbert symbol `(a, b)_v` of nonzero rationals at a place of Q.
pub fn hilbert(a: &Rational, b: &Rational, place: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        bail_input!("hilbert symbol needs nonzero arguments");
    }
    let l = match place {
        Place::Infinity => {
            return Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 });
        }
        Place::Prime(l) => l,
    };
    if !is_prime(l) {
        bail_input!("{l} is not prime");
    }
    let (alpha, u) = unit_part(a, l);
    let (beta, v) = unit_part(b, l);
    if l == 2 {
        let (u, v) = (unit_mod8(&u) as i64, unit_mod8(&v) as i64);
        let eps = |x: i64| ((x - 1) / 2) % 2;
        let omega = |x: i64| ((x * x - 1) / 8) % 2;
        let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
        return Ok(if e.rem_euclid(2) == 0 { 1 } else { -1 });
    }
    let eps = ((l - 1) / 2) as i64;
    let mut s: i8 = if (alpha * beta * eps).rem_euclid(2) == 0 { 1 } else { -1 };
    if beta.rem_euclid(2) == 1 {
        s *= legendre_unchecked(unit_residue_small(&u, l), l);
    }
    if alpha.rem_euclid(2) == 1 {
        s *= legendre_unchecked(unit_residue_small(&v, l), l);
    }
    Ok(s)
}

/// True iff the nonzero rational `x` is a square in `Q_l`.
pub fn is_square_ql(x: &Rational, l: u64) -> Result<bool> {
    if x.is_zero() {
        bail_input!("is_square_ql needs a nonzero argument");
    }
    if !is_prime(l) {
        bail_input!("{l} is not prime");
    }
    let (v, u) = unit_part(x, l);
    if v.rem_euclid(2) != 0 {
        return Ok(false);
    }
    Ok(if l == 2 {
        unit_mod8(&u) == 1
    } else {
        legendre_unchecked(unit_residue_small(&u, l), l) == 1
    })
}

pub fn big_pow(l: u64, k: u32) -> BigUint {
    BigUint::from(l).pow(k)
}

/// Image of an `l`-integral rational in `Z / l^k`.
pub fn residue_mod(x: &Rational, l: u64, k: u32) -> Result<BigUint> {
    let modulus = BigInt::from(big_pow(l, k));
    let den = BigInt::from(*x.denom());
    let inv = mod_inverse(&den, &modulus)
        .ok_or_else(|| crate::error::Error::InvalidInput(format!("{x} is not {l}-integral")))?;
    let r = (BigInt::from(*x.numer()) * inv).mod_floor(&modulus);
    Ok(r.to_biguint().expect("nonnegative"))
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

fn tonelli_shanks(a: u128, p: u128) -> u128 {
    if p % 4 == 3 {
        return pow_mod(a, (p + 1) / 4, p);
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

/// Square root of the `l`-adic unit `a` modulo `l^k`.
///
/// Returns `None` when `a` is not a square in `Z_l`. The root is canonical
/// and stable under increasing `k`: for odd `l` it lifts the residue in
/// `1..=(l-1)/2`, for `l = 2` it is the root congruent to 1 mod 4.
pub fn hensel_sqrt(a: &Rational, l: u64, k: u32) -> Result<Option<BigUint>> {
    if k == 0 {
        bail_input!("hensel precision must be positive");
    }
    if !is_prime(l) {
        bail_input!("{l} is not prime");
    }
    match ord_rational(a, l) {
        Some(0) => {}
        _ => bail_input!("hensel_sqrt needs an {l}-adic unit, got {a}"),
    }
    if l == 2 {
        return Ok(dyadic_sqrt(a, k));
    }
    let p = l as u128;
    let a0 = unit_residue_small(a, l);
    if legendre_unchecked(a0, l) != 1 {
        return Ok(None);
    }
    let r0 = tonelli_shanks(a0, p);
    let r0 = r0.min(p - r0);
    let modulus = BigInt::from(big_pow(l, k));
    let target = BigInt::from(residue_mod(a, l, k)?);
    // (2 r0)^{-1} mod l; linear lifting gains one digit per step
    let c = BigInt::from(pow_mod(2 * r0 % p, p - 2, p));
    let mut r = BigInt::from(r0);
    for _ in 1..k {
        r = (&r - (&r * &r - &target) * &c).mod_floor(&modulus);
    }
    Ok(Some(r.to_biguint().expect("nonnegative")))
}

fn dyadic_sqrt(a: &Rational, k: u32) -> Option<BigUint> {
    let target = BigInt::from(residue_mod(a, 2, (k + 1).max(3)).expect("odd denominator"));
    if (&target % 8u32) != BigInt::one() {
        return None;
    }
    let mut s = BigInt::one();
    for j in 3..=k {
        let m = BigInt::one() << (j + 1);
        if !(&s * &s - &target).mod_floor(&m).is_zero() {
            s += BigInt::one() << (j - 1);
        }
    }
    let modulus = BigInt::one() << k;
    Some(s.mod_floor(&modulus).to_biguint().expect("nonnegative"))
}

/// `ord_l` of a residue class known modulo `l^k`; `None` means "at least k".
pub fn ord_residue(x: &BigUint, l: u64, k: u32) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let l = BigUint::from(l);
    let mut x = x.clone();
    let mut v = 0;
    while (&x % &l).is_zero() {
        x /= &l;
        v += 1;
        if v >= k {
            return None;
        }
    }
    Some(v)
}

pub(crate) fn small_residue(x: &BigUint, modulus: u64) -> u64 {
    (x % modulus).to_u64().expect("fits")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    fn brute_square_mod(a: i128, p: u64) -> i8 {
        let a = a.rem_euclid(p as i128);
        if a == 0 {
            return 0;
        }
        if (1..p as i128).any(|x| (x * x) % p as i128 == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(1, 7).unwrap(), 1);
        assert_eq!(legendre(2, 7).unwrap(), 1);
        assert_eq!(legendre(0, 5).unwrap(), 0);
        assert_eq!(legendre(3, 7).unwrap(), -1);
        assert!(legendre(3, 2).is_err());
        assert!(legendre(3, 9).is_err());
    }

    #[test]
    fn legendre_matches_enumeration() {
        for p in (3..100u64).filter(|&p| is_prime(p)) {
            for a in -120..120 {
                assert_eq!(legendre(a, p).unwrap(), brute_square_mod(a, p), "({a}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(41, 2).unwrap(), 1);
        assert_eq!(kronecker(5, 2).unwrap(), -1);
        assert_eq!(kronecker(5, 11).unwrap(), 1);
        assert_eq!(kronecker(4, 2).unwrap(), 0);
        assert_eq!(kronecker(-1, -1).unwrap(), -1);
        assert_eq!(kronecker(7, 1).unwrap(), 1);
        assert!(kronecker(5, 0).is_err());
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert(&int(1), &int(-7), Place::Prime(7)).unwrap(), 1);
        assert_eq!(hilbert(&int(1), &int(3), Place::Infinity).unwrap(), 1);
        assert_eq!(hilbert(&int(-1), &int(-1), Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert(&int(-3), &int(2), Place::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert(&int(-1), &int(-1), Place::Prime(2)).unwrap(), -1);
        assert!(hilbert(&int(0), &int(2), Place::Prime(2)).is_err());
    }

    /// Solvability of z^2 = a x^2 + b y^2 by a primitive triple modulo 2^6,
    /// for integers `a`, `b` with 2-adic valuation at most 1.
    fn dyadic_solvable(a: i64, b: i64) -> bool {
        let m = 64;
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if x % 2 == 0 && y % 2 == 0 && z % 2 == 0 {
                        continue;
                    }
                    if (z * z - a * x * x - b * y * y).rem_euclid(m) == 0 {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn dyadic_hilbert_matches_solvability_search() {
        let reps = [1, 3, 5, 7, 2, 6, 10, 14, -1, -3, -5, -7, -2, -6, -10, -14];
        for &a in &reps {
            for &b in &reps {
                let want = if dyadic_solvable(a, b) { 1 } else { -1 };
                let got = hilbert(&int(a as i128), &int(b as i128), Place::Prime(2)).unwrap();
                assert_eq!(got, want, "({a},{b})_2");
            }
        }
    }

    #[test]
    fn hensel_examples() {
        assert_eq!(hensel_sqrt(&int(41), 2, 5).unwrap(), Some(BigUint::from(13u32)));
        assert_eq!(hensel_sqrt(&int(5), 11, 1).unwrap(), Some(BigUint::from(4u32)));
        assert_eq!(hensel_sqrt(&int(5), 2, 3).unwrap(), None);
        assert_eq!(hensel_sqrt(&int(2), 5, 4).unwrap(), None);
        assert!(hensel_sqrt(&int(50), 5, 3).is_err());
        assert!(hensel_sqrt(&int(3), 5, 0).is_err());
    }

    #[test]
    fn hensel_of_rational_unit() {
        // 1/4 has root 1/2; canonical residue mod 7 is min(4, 3) = 3
        let r = hensel_sqrt(&rat(1, 4), 7, 3).unwrap().unwrap();
        let m = 343u32;
        assert_eq!((&r * &r * 4u32) % m, BigUint::one());
        assert_eq!(&r % 7u32, BigUint::from(3u32));
    }

    #[test]
    fn square_tests() {
        assert!(is_square_ql(&int(9), 5).unwrap());
        assert!(!is_square_ql(&int(98), 2).unwrap());
        assert!(is_square_ql(&int(-39), 2).unwrap());
        assert!(is_square_ql(&rat(4, 25), 5).unwrap());
        assert!(!is_square_ql(&int(5), 5).unwrap());
        assert!(is_square_ql(&int(0), 5).is_err());
    }

    fn nonzero_rational() -> impl Strategy<Value = Rational> {
        (-2000i128..2000, 1i128..500)
            .prop_filter("nonzero", |(n, _)| *n != 0)
            .prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn hilbert_bimultiplicative_and_symmetric(
            a in nonzero_rational(), a2 in nonzero_rational(), b in nonzero_rational(),
            l in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]),
        ) {
            let v = Place::Prime(l);
            prop_assert_eq!(hilbert(&a, &b, v).unwrap(), hilbert(&b, &a, v).unwrap());
            prop_assert_eq!(
                hilbert(&(a * a2), &b, v).unwrap(),
                hilbert(&a, &b, v).unwrap() * hilbert(&a2, &b, v).unwrap()
            );
        }

        #[test]
        fn hensel_roots_are_stable(a in 1i128..100_000, l in prop::sample::select(vec![2u64, 3, 7, 13, 97]), k in 1u32..10) {
            let a = Rational::from_integer(a);
            prop_assume!(ord_rational(&a, l) == Some(0));
            if let Some(r) = hensel_sqrt(&a, l, k + 1).unwrap() {
                let lower = hensel_sqrt(&a, l, k).unwrap().unwrap();
                prop_assert_eq!(&r % big_pow(l, k), lower);
                let m = big_pow(l, k + 1);
                prop_assert_eq!((&r * &r) % &m, residue_mod(&a, l, k + 1).unwrap());
            }
        }
    }
}

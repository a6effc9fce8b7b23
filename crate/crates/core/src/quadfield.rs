//! Real quadratic fields `Q(√d)` with `d ≡ 1 mod 4` squarefree: integral
//! elements, prime splitting and prime-ideal valuations.
//!
//! Prime ideals are never stored as modules. A split prime `l` has two
//! spots, told apart by the sign of the image of `√d` under the canonical
//! `l`-adic square root (see [`crate::padic::hensel_sqrt`]); valuations at
//! split spots are read off that embedding.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{int, is_prime, is_square, is_squarefree, ord_int, ord_rational, rat, Rational};
use crate::error::{bail_input, Error, Result};
use crate::logcombo::LogCombo;
use crate::padic::{big_pow, hensel_sqrt, kronecker, mod_inverse, ord_residue};

/// An element `(x + y√d)/den` of the maximal order, `den ∈ {1, 2}`.
///
/// Canonical form: `den = 2` only when `x` and `y` are both odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadElem {
    pub x: i128,
    pub y: i128,
    pub den: i128,
}

impl QuadElem {
    pub fn new(x: i128, y: i128, den: i128) -> Result<Self> {
        match den {
            1 => Ok(QuadElem { x, y, den: 1 }),
            2 if (x - y) % 2 == 0 => Ok(QuadElem { x, y, den: 2 }.normalized()),
            2 => bail_input!("({x} + {y}√d)/2 is not integral"),
            _ => bail_input!("denominator must be 1 or 2, got {den}"),
        }
    }

    pub fn from_int(x: i128) -> Self {
        QuadElem { x, y: 0, den: 1 }
    }

    /// The element `√d`.
    pub fn sqrt_disc() -> Self {
        QuadElem { x: 0, y: 1, den: 1 }
    }

    fn normalized(self) -> Self {
        if self.den == 2 && self.x % 2 == 0 && self.y % 2 == 0 {
            QuadElem { x: self.x / 2, y: self.y / 2, den: 1 }
        } else {
            self
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn conj(&self) -> Self {
        QuadElem { x: self.x, y: -self.y, den: self.den }
    }

    pub fn neg(&self) -> Self {
        QuadElem { x: -self.x, y: -self.y, den: self.den }
    }

    /// Rational coordinates `(a, b)` with `self = a + b√d`.
    pub fn coords(&self) -> (Rational, Rational) {
        (rat(self.x, self.den), rat(self.y, self.den))
    }

    pub fn add(&self, other: &QuadElem) -> QuadElem {
        let (x, y) = (self.x * other.den + other.x * self.den, self.y * other.den + other.y * self.den);
        let den = self.den * other.den;
        QuadElem::reduce(x, y, den)
    }

    pub fn sub(&self, other: &QuadElem) -> QuadElem {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i128) -> QuadElem {
        QuadElem::reduce(self.x * k, self.y * k, self.den)
    }

    /// `self / k` when the quotient is still integral.
    pub fn div_exact(&self, k: i128) -> Option<QuadElem> {
        if k == 0 {
            return None;
        }
        let (x, y, den) = (self.x, self.y, self.den * k);
        // (x + y√d)/den integral iff 2x/den, 2y/den integers with matching parity
        if (2 * x) % den != 0 || (2 * y) % den != 0 {
            return None;
        }
        let (x2, y2) = (2 * x / den, 2 * y / den);
        QuadElem::new(x2, y2, 2).ok()
    }

    fn reduce(x: i128, y: i128, den: i128) -> QuadElem {
        // den divides 4 here; bring back to den ∈ {1, 2}
        let g = x.gcd(&y).gcd(&den);
        let (x, y, den) = (x / g, y / g, den / g);
        let (x, y, den) = if den < 0 { (-x, -y, -den) } else { (x, y, den) };
        QuadElem::new(x, y, den).expect("integral operands give integral results")
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.y < 0 { '-' } else { '+' };
        if self.den == 1 {
            write!(f, "{} {sign} {}√d", self.x, self.y.abs())
        } else {
            write!(f, "({} {sign} {}√d)/2", self.x, self.y.abs())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpotKind {
    Split,
    Inert,
    Ramified,
}

/// Which of the two embeddings `√d ↦ ±s` a split spot corresponds to, where
/// `s` is the canonical `l`-adic square root of `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Canonical,
    Conjugate,
}

/// A prime ideal of a quadratic field lying over the rational prime `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PrimeSpot {
    pub l: u64,
    pub kind: SpotKind,
    pub branch: Option<Branch>,
}

impl PrimeSpot {
    pub fn residue_degree(&self) -> u32 {
        match self.kind {
            SpotKind::Inert => 2,
            _ => 1,
        }
    }

    pub fn ramification_index(&self) -> u32 {
        match self.kind {
            SpotKind::Ramified => 2,
            _ => 1,
        }
    }

    /// `ord` of a nonzero rational at this spot.
    pub fn ord_rational(&self, q: &Rational) -> i64 {
        ord_rational(q, self.l).expect("nonzero rational") * self.ramification_index() as i64
    }
}

impl fmt::Display for PrimeSpot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.branch) {
            (SpotKind::Split, Some(Branch::Canonical)) => write!(f, "{}+", self.l),
            (SpotKind::Split, _) => write!(f, "{}-", self.l),
            (SpotKind::Inert, _) => write!(f, "{}i", self.l),
            (SpotKind::Ramified, _) => write!(f, "{}r", self.l),
        }
    }
}

/// `f·log l` for the norm of the spot.
pub fn spot_norm_log(spot: &PrimeSpot) -> LogCombo {
    LogCombo::single(spot.l, int(spot.residue_degree() as i128))
}

/// The real quadratic field of discriminant `disc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadField {
    disc: i128,
}

impl QuadField {
    pub fn new(disc: i128) -> Result<Self> {
        if disc <= 1 || disc.rem_euclid(4) != 1 || is_square(disc) || !is_squarefree(disc)? {
            return Err(Error::InvalidInput(format!(
                "{disc} is not a squarefree discriminant ≡ 1 mod 4"
            )));
        }
        Ok(QuadField { disc })
    }

    pub fn disc(&self) -> i128 {
        self.disc
    }

    pub fn norm(&self, e: &QuadElem) -> Rational {
        rat(e.x * e.x - e.y * e.y * self.disc, e.den * e.den)
    }

    pub fn trace(&self, e: &QuadElem) -> Rational {
        rat(2 * e.x, e.den)
    }

    pub fn mul(&self, a: &QuadElem, b: &QuadElem) -> QuadElem {
        let x = a.x * b.x + a.y * b.y * self.disc;
        let y = a.x * b.y + a.y * b.x;
        QuadElem::reduce(x, y, a.den * b.den)
    }

    pub fn square(&self, a: &QuadElem) -> QuadElem {
        self.mul(a, a)
    }

    /// Totally positive / totally negative tests via trace and norm.
    pub fn is_totally_negative(&self, e: &QuadElem) -> bool {
        self.norm(e) > int(0) && self.trace(e) < int(0)
    }

    /// The prime ideals above `l`.
    pub fn splitting(&self, l: u64) -> Result<Vec<PrimeSpot>> {
        if !is_prime(l) {
            bail_input!("{l} is not prime");
        }
        let spot = |kind, branch| PrimeSpot { l, kind, branch };
        Ok(match kronecker(self.disc, l as i128)? {
            1 => vec![
                spot(SpotKind::Split, Some(Branch::Canonical)),
                spot(SpotKind::Split, Some(Branch::Conjugate)),
            ],
            -1 => vec![spot(SpotKind::Inert, None)],
            _ => vec![spot(SpotKind::Ramified, None)],
        })
    }

    pub fn spot_kind(&self, l: u64) -> Result<SpotKind> {
        Ok(self.splitting(l)?[0].kind)
    }

    /// The image of `√d` modulo `l^k` under the embedding of a split spot.
    pub fn root_at(&self, spot: &PrimeSpot, k: u32) -> Result<BigUint> {
        let s = match (spot.kind, spot.branch) {
            (SpotKind::Split, Some(b)) => {
                let s = hensel_sqrt(&int(self.disc), spot.l, k)?.ok_or_else(|| {
                    Error::Internal(format!("{} has no square root mod {}", self.disc, spot.l))
                })?;
                if b == Branch::Canonical {
                    s
                } else {
                    (big_pow(spot.l, k) - s) % big_pow(spot.l, k)
                }
            }
            _ => bail_input!("spot {spot} is not split"),
        };
        Ok(s)
    }

    /// Image of an integral element in `Z / l^k` through a split spot.
    pub fn embed(&self, e: &QuadElem, spot: &PrimeSpot, k: u32) -> Result<BigUint> {
        let halve = e.den == 2 && spot.l == 2;
        let kk = if halve { k + 1 } else { k };
        let modulus = BigInt::from(big_pow(spot.l, kk));
        let s = BigInt::from(self.root_at(spot, kk)?);
        let mut v = (BigInt::from(e.x) + BigInt::from(e.y) * s).mod_floor(&modulus);
        if halve {
            v >>= 1;
        } else if e.den == 2 {
            let inv = mod_inverse(&BigInt::from(2), &modulus).expect("odd modulus");
            v = (v * inv).mod_floor(&modulus);
        }
        Ok(v.to_biguint().expect("nonnegative"))
    }

    /// Valuation of a nonzero integral element at a prime ideal.
    pub fn ord_at(&self, e: &QuadElem, spot: &PrimeSpot) -> Result<i64> {
        if e.is_zero() {
            bail_input!("ord of zero is infinite");
        }
        let norm_num = e.x * e.x - e.y * e.y * self.disc;
        let l = spot.l;
        let den_part = ord_int(e.den * e.den, l).unwrap() as i64;
        let norm_ord = ord_int(norm_num, l).unwrap() as i64 - den_part;
        match spot.kind {
            SpotKind::Inert => Ok(norm_ord / 2),
            SpotKind::Ramified => Ok(norm_ord),
            SpotKind::Split => {
                let mut k = (ord_int(norm_num, l).unwrap() as i64 + den_part + 2) as u32;
                loop {
                    let img = self.embed(e, spot, k)?;
                    if let Some(v) = ord_residue(&img, l, k) {
                        return Ok(v as i64);
                    }
                    k *= 2;
                }
            }
        }
    }

    /// Valuation of `e · q` for a nonzero rational `q`.
    pub fn ord_scaled(&self, e: &QuadElem, q: &Rational, spot: &PrimeSpot) -> Result<i64> {
        if q.is_zero() {
            bail_input!("ord of zero is infinite");
        }
        Ok(self.ord_at(e, spot)? + spot.ord_rational(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q41() -> QuadField {
        QuadField::new(41).unwrap()
    }

    fn split2() -> (PrimeSpot, PrimeSpot) {
        let s = q41().splitting(2).unwrap();
        (s[0], s[1])
    }

    #[test]
    fn construction_guards() {
        assert!(QuadField::new(5).is_ok());
        assert!(QuadField::new(13).is_ok());
        assert!(QuadField::new(3).is_err());
        assert!(QuadField::new(9).is_err());
        assert!(QuadField::new(45).is_err());
        assert!(QuadField::new(1).is_err());
        assert!(QuadElem::new(1, 2, 2).is_err());
        assert_eq!(QuadElem::new(2, 4, 2).unwrap(), QuadElem::new(1, 2, 1).unwrap());
    }

    #[test]
    fn norms() {
        let f = QuadField::new(5).unwrap();
        assert_eq!(f.norm(&QuadElem::new(7, 1, 2).unwrap()), int(11));
        assert_eq!(f.norm(&QuadElem::sqrt_disc()), int(-5));
        assert_eq!(f.norm(&QuadElem::from_int(1)), int(1));
    }

    #[test]
    fn splitting_types() {
        let s = q41().splitting(2).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|p| p.kind == SpotKind::Split));
        let f5 = QuadField::new(5).unwrap();
        assert_eq!(f5.splitting(2).unwrap()[0].kind, SpotKind::Inert);
        let r = q41().splitting(41).unwrap();
        assert_eq!((r.len(), r[0].kind), (1, SpotKind::Ramified));
        assert!(q41().splitting(4).is_err());
    }

    #[test]
    fn canonical_root_label_over_two() {
        let (a, b) = split2();
        assert_eq!(q41().root_at(&a, 5).unwrap(), BigUint::from(13u32));
        assert_eq!(q41().root_at(&b, 5).unwrap(), BigUint::from(19u32));
    }

    #[test]
    fn valuation_of_scaled_element() {
        // (1 + √41)/10: 1 + 13 = 14 has ord_2 one, 1 - 13 = -12 has ord_2 two
        let f = q41();
        let (a, b) = split2();
        let e = QuadElem::new(1, 1, 1).unwrap();
        let tenth = rat(1, 10);
        assert_eq!(f.ord_scaled(&e, &tenth, &a).unwrap(), 0);
        assert_eq!(f.ord_scaled(&e, &tenth, &b).unwrap(), 1);
    }

    #[test]
    fn simple_valuations() {
        let f = q41();
        let r = f.splitting(41).unwrap()[0];
        assert_eq!(f.ord_at(&QuadElem::sqrt_disc(), &r).unwrap(), 1);
        for l in [2, 3, 5, 41] {
            for spot in f.splitting(l).unwrap() {
                assert_eq!(f.ord_at(&QuadElem::from_int(1), &spot).unwrap(), 0);
            }
        }
        assert!(f.ord_at(&QuadElem::from_int(0), &r).is_err());
    }

    #[test]
    fn norm_log_per_spot() {
        let (a, _) = split2();
        assert_eq!(spot_norm_log(&a), LogCombo::single(2, int(1)));
        let i3 = QuadField::new(5).unwrap().splitting(3).unwrap()[0];
        assert_eq!(spot_norm_log(&i3), LogCombo::single(3, int(2)));
        let r = q41().splitting(41).unwrap()[0];
        assert_eq!(spot_norm_log(&r), LogCombo::single(41, int(1)));
    }

    #[test]
    fn division_and_arithmetic() {
        let f = QuadField::new(5).unwrap();
        let phi = QuadElem::new(1, 1, 2).unwrap();
        let phi2 = f.square(&phi);
        assert_eq!(phi2, phi.add(&QuadElem::from_int(1)));
        assert_eq!(QuadElem::new(4, 8, 1).unwrap().div_exact(4), Some(QuadElem::new(1, 2, 1).unwrap()));
        assert_eq!(QuadElem::new(2, 2, 1).unwrap().div_exact(4), Some(QuadElem::new(1, 1, 2).unwrap()));
        assert_eq!(QuadElem::new(2, 0, 1).unwrap().div_exact(4), None);
    }

    fn elem() -> impl Strategy<Value = QuadElem> {
        (-300i128..300, -300i128..300, prop::bool::ANY)
            .prop_filter("nonzero", |(x, y, _)| *x != 0 || *y != 0)
            .prop_map(|(x, y, half)| {
                if half && (x - y) % 2 == 0 {
                    QuadElem::new(x, y, 2).unwrap()
                } else {
                    QuadElem::new(x, y, 1).unwrap()
                }
            })
    }

    proptest! {
        #[test]
        fn valuations_sum_to_norm_valuation(
            e in elem(),
            disc in prop::sample::select(vec![5i128, 13, 17, 41, 65, 101]),
            l in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17, 41]),
        ) {
            let f = QuadField::new(disc).unwrap();
            let total: i64 = f.splitting(l).unwrap().iter()
                .map(|s| s.residue_degree() as i64 * f.ord_at(&e, s).unwrap())
                .sum();
            prop_assert_eq!(total, ord_rational(&f.norm(&e), l).unwrap());
        }

        #[test]
        fn valuation_is_additive_and_conjugation_swaps(
            a in elem(), b in elem(),
            l in prop::sample::select(vec![2u64, 5, 37, 43]),
        ) {
            let f = q41();
            let ab = f.mul(&a, &b);
            for s in f.splitting(l).unwrap() {
                prop_assert_eq!(f.ord_at(&ab, &s).unwrap(), f.ord_at(&a, &s).unwrap() + f.ord_at(&b, &s).unwrap());
            }
            let spots = f.splitting(l).unwrap();
            if spots.len() == 2 {
                prop_assert_eq!(f.ord_at(&a.conj(), &spots[0]).unwrap(), f.ord_at(&a, &spots[1]).unwrap());
            }
        }

        #[test]
        fn precision_does_not_change_valuation(e in elem(), extra in 1u32..6) {
            let f = q41();
            for s in f.splitting(2).unwrap().iter().chain(f.splitting(5).unwrap().iter()) {
                let v = f.ord_at(&e, s).unwrap();
                let k = v as u32 + extra;
                let img = f.embed(&e, s, k).unwrap();
                prop_assert_eq!(ord_residue(&img, s.l, k), Some(v as u32));
            }
        }
    }
}

//! Quartic non-biquadratic CM fields `K = F(√Δ)`, `F = Q(√D)`, and their
//! reflex data.
//!
//! The reflex field is `K̃ = F̃(√Δ̃)` with `F̃ = Q(√D̃)`, `D̃ = ΔΔ'`, and the
//! generator `Δ̃ = 2Δ₀ + 2√D̃` coming from `(√Δ + √Δ')² = tr Δ + 2√(ΔΔ')`.
//! Only the square class of `Δ̃` in each completion of `F̃` is ever used.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{int, is_prime, is_square, is_squarefree, prime_divisors, rat, Rational};
use crate::error::{Error, Result};
use crate::padic::{big_pow, kronecker, legendre, small_residue};
use crate::quadfield::{PrimeSpot, QuadElem, QuadField, SpotKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `D̃` prime: the intersection formula is a theorem.
    #[default]
    Strict,
    /// `D̃` squarefree: the formula is conjectural but the evaluation is the same.
    Permissive,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Permissive => "permissive",
        })
    }
}

/// The field input file: `{"D": 5, "delta": {"x": -13, "y": 1, "den": 2}, "mode": "strict"}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    #[serde(rename = "D")]
    pub d: u64,
    pub delta: QuadElem,
    #[serde(default)]
    pub mode: Mode,
}

/// A validated CM field together with its reflex data. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmField {
    pub d: u64,
    pub delta: QuadElem,
    pub w: QuadElem,
    pub dtilde: u64,
    pub delta_tilde: QuadElem,
    pub base: QuadField,
    pub reflex: QuadField,
    pub w_k: u32,
    pub mode: Mode,
    rel_diff: Vec<(PrimeSpot, u32)>,
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Rejected(msg.into())
}

/// `(w² - Δ)/4 ∈ O_F`, the integrality condition making
/// `O_F + O_F (w + √Δ)/2` an order.
pub fn is_valid_w(base: &QuadField, delta: &QuadElem, w: &QuadElem) -> bool {
    base.square(w).sub(delta).div_exact(4).is_some()
}

/// Searches `w = a + bφ`, `a, b ∈ {0..3}`, `φ = (1+√D)/2`.
fn find_w(base: &QuadField, delta: &QuadElem) -> Option<QuadElem> {
    (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).find_map(|(a, b)| {
        let w = QuadElem::new(2 * a + b, b, 2).ok()?;
        is_valid_w(base, delta, &w).then_some(w)
    })
}

/// How the quadratic extension `F(√e)` of `F` behaves at `spot`.
pub fn local_extension_type(field: &QuadField, e: &QuadElem, spot: &PrimeSpot) -> Result<SpotKind> {
    let l = spot.l;
    let v = field.ord_at(e, spot)?;
    if v % 2 != 0 {
        return Ok(SpotKind::Ramified);
    }
    let v = v as u32;
    match spot.kind {
        SpotKind::Split => {
            let k = v + 3;
            let img = field.embed(e, spot, k)? / big_pow(l, v);
            if l == 2 {
                Ok(match small_residue(&img, 8) {
                    1 => SpotKind::Split,
                    5 => SpotKind::Inert,
                    _ => SpotKind::Ramified,
                })
            } else {
                Ok(legendre_kind(small_residue(&img, l) as i128, l)?)
            }
        }
        SpotKind::Inert => {
            let unit = e
                .div_exact((l as i128).pow(v))
                .ok_or_else(|| Error::Internal(format!("{e} not divisible by {l}^{v}")))?;
            if l == 2 {
                Ok(dyadic_inert_type(field, &unit))
            } else {
                // u is a square in the unramified extension iff N(u) is a square mod l
                let n = field.norm(&unit);
                Ok(legendre_kind(n.numer() * n.denom(), l)?)
            }
        }
        SpotKind::Ramified => {
            // ord = 2h forces l^h | x and l^h | y; the residue of e/(√d)^{2h}
            // is x/(den·l^h) · ((d/l)^h)^{-1} mod l
            let h = v / 2;
            let lh = (l as i128).pow(h);
            if e.x % lh != 0 {
                return Err(Error::Internal(format!("{e} has ord {v} at {spot} but {l}^{h} ∤ x")));
            }
            let cof = (field.disc() / l as i128).rem_euclid(l as i128);
            let mut r = ((e.x / lh).rem_euclid(l as i128) * e.den) % l as i128;
            for _ in 0..h {
                r = (r * cof) % l as i128;
            }
            Ok(legendre_kind(r, l)?)
        }
    }
}

fn legendre_kind(u: i128, l: u64) -> Result<SpotKind> {
    Ok(match legendre(u, l)? {
        1 => SpotKind::Split,
        -1 => SpotKind::Inert,
        _ => return Err(Error::Internal(format!("expected a unit residue mod {l}"))),
    })
}

/// Square class of a unit at the inert prime 2, by enumerating squares in
/// `O/8O` with basis `1, ω = (1+√d)/2`.
fn dyadic_inert_type(field: &QuadField, u: &QuadElem) -> SpotKind {
    let k = (field.disc() - 1) / 4;
    let a = (u.x - u.y) / u.den;
    let b = 2 * u.y / u.den;
    let mut sq8 = BTreeSet::new();
    for p in 0..8i128 {
        for q in 0..8i128 {
            if (p * p + p * q - k * q * q) % 2 == 0 {
                continue;
            }
            sq8.insert(((p * p + q * q * k).rem_euclid(8), (2 * p * q + q * q).rem_euclid(8)));
        }
    }
    let target = (a.rem_euclid(8), b.rem_euclid(8));
    if sq8.contains(&target) {
        return SpotKind::Split;
    }
    let sq4: BTreeSet<_> = sq8.iter().map(|&(x, y)| (x % 4, y % 4)).collect();
    if sq4.contains(&(target.0 % 4, target.1 % 4)) {
        SpotKind::Inert
    } else {
        SpotKind::Ramified
    }
}

impl CmField {
    pub fn build(d: u64, delta: QuadElem, mode: Mode) -> Result<Self> {
        if d % 4 != 1 || !is_prime(d) {
            return Err(reject(format!("D = {d} must be a prime ≡ 1 mod 4")));
        }
        let base = QuadField::new(d as i128).map_err(|e| reject(e.to_string()))?;
        if !base.is_totally_negative(&delta) {
            return Err(reject(format!("Δ = {delta} is not totally negative")));
        }
        let norm = base.norm(&delta);
        debug_assert!(norm.is_integer());
        let dt = norm.to_integer();
        if dt.rem_euclid(4) != 1 {
            return Err(reject(format!("D̃ = {dt} is not ≡ 1 mod 4")));
        }
        if is_square(dt) {
            return Err(reject(format!("D̃ = {dt} is a perfect square (biquadratic or degenerate)")));
        }
        if !is_squarefree(dt)? {
            return Err(reject(format!("D̃ = {dt} is not squarefree")));
        }
        if mode == Mode::Strict && !is_prime(dt as u64) {
            return Err(reject(format!("D̃ = {dt} is not prime (use permissive mode)")));
        }
        let w = find_w(&base, &delta).ok_or_else(|| {
            reject("O_K not of the assumed free form: no w with w² ≡ Δ mod 4O_F")
        })?;
        let reflex = QuadField::new(dt).map_err(|e| reject(e.to_string()))?;
        // Δ = Δ₀ + Δ₁√D with Δ₀ = x/den; Δ̃ = 2Δ₀ + 2√D̃
        let two_delta0 = 2 * delta.x / delta.den;
        let delta_tilde = QuadElem::new(two_delta0, 2, 1)?;
        let w_k = if d == 5 && dt == 5 { 10 } else { 2 };
        let mut field = CmField {
            d,
            delta,
            w,
            dtilde: dt as u64,
            delta_tilde,
            base,
            reflex,
            w_k,
            mode,
            rel_diff: Vec::new(),
        };
        let (_, delta1) = field.delta_coords();
        if reflex.norm(&delta_tilde) != int(4 * d as i128) * delta1 * delta1 {
            return Err(Error::Internal("N(Δ̃) ≠ 4DΔ₁²".into()));
        }
        field.rel_diff = field.compute_relative_different()?;
        Ok(field)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        Self::build(spec.d, spec.delta, spec.mode)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { d: self.d, delta: self.delta, mode: self.mode }
    }

    /// `(Δ₀, Δ₁)` with `Δ = Δ₀ + Δ₁√D`.
    pub fn delta_coords(&self) -> (Rational, Rational) {
        self.delta.coords()
    }

    fn compute_relative_different(&self) -> Result<Vec<(PrimeSpot, u32)>> {
        let n = self.reflex.norm(&self.delta_tilde).to_integer();
        let mut primes: BTreeSet<u64> = prime_divisors(n)?.into_iter().collect();
        primes.insert(2);
        let mut out = Vec::new();
        for l in primes {
            for spot in self.reflex.splitting(l)? {
                let kind = local_extension_type(&self.reflex, &self.delta_tilde, &spot)?;
                if kind != SpotKind::Ramified {
                    continue;
                }
                if l == 2 {
                    return Err(reject(format!(
                        "reflex field ramifies at the dyadic spot {spot}: outside supported hypotheses"
                    )));
                }
                out.push((spot, 1));
            }
        }
        let total: u64 = out.iter().map(|(s, e)| s.l.pow(s.residue_degree() * e)).product();
        if total != self.d {
            return Err(reject(format!(
                "N(d_K̃/F̃) = {total} ≠ D = {}: O_K not of the assumed free form",
                self.d
            )));
        }
        Ok(out)
    }

    /// The relative different `d_{K̃/F̃}` as a valuation vector.
    pub fn relative_different(&self) -> &[(PrimeSpot, u32)] {
        &self.rel_diff
    }

    pub fn rel_diff_exponent(&self, spot: &PrimeSpot) -> u32 {
        self.rel_diff
            .iter()
            .find(|(s, _)| s == spot)
            .map_or(0, |&(_, e)| e)
    }

    /// Split / inert / ramified behavior of a prime of `F̃` in `K̃`.
    pub fn classify_in_reflex_cm(&self, spot: &PrimeSpot) -> Result<SpotKind> {
        local_extension_type(&self.reflex, &self.delta_tilde, spot)
    }

    /// `ρ(𝔞)`: the number of integral ideals of `K̃` with relative norm `𝔞`,
    /// where `𝔞` is given by its nonzero exponents.
    pub fn rho(&self, vals: &[(PrimeSpot, i64)]) -> Result<u64> {
        if vals.iter().any(|&(_, e)| e < 0) {
            return Ok(0);
        }
        let mut acc = 1u64;
        for &(spot, e) in vals {
            let local = match self.classify_in_reflex_cm(&spot)? {
                SpotKind::Ramified => 1,
                SpotKind::Inert => u64::from(e % 2 == 0),
                SpotKind::Split => 1 + e as u64,
            };
            if local == 0 {
                return Ok(0);
            }
            acc *= local;
        }
        Ok(acc)
    }

    /// `l` splits completely in the Galois closure `M = K K̃`: split in `F`,
    /// split in `F̃`, and both primes of `F̃` split in `K̃`.
    pub fn splits_completely_in_closure(&self, l: u64) -> Result<bool> {
        if kronecker(self.d as i128, l as i128)? != 1 {
            return Ok(false);
        }
        self.splits_completely_in_reflex(l)
    }

    /// `l` splits completely in `K̃`.
    pub fn splits_completely_in_reflex(&self, l: u64) -> Result<bool> {
        let spots = self.reflex.splitting(l)?;
        if spots[0].kind != SpotKind::Split {
            return Ok(false);
        }
        for s in &spots {
            if self.classify_in_reflex_cm(s)? != SpotKind::Split {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `l` inert in `F̃` and the inert prime splits in `K̃`.
    pub fn inert_then_split_in_reflex(&self, l: u64) -> Result<bool> {
        let spots = self.reflex.splitting(l)?;
        Ok(spots[0].kind == SpotKind::Inert
            && self.classify_in_reflex_cm(&spots[0])? == SpotKind::Split)
    }

    /// Short human-readable identifier.
    pub fn id(&self) -> String {
        let (x, y, den) = (self.delta.x, self.delta.y, self.delta.den);
        format!("D={},delta=({x}{:+}√{})/{den},Dt={}", self.d, y, self.d, self.dtilde)
    }

    pub fn rel_diff_norm(&self) -> u64 {
        self.rel_diff
            .iter()
            .map(|(s, e)| s.l.pow(s.residue_degree() * e))
            .product()
    }

    /// `true` when `t = (n + m√D̃)/(2D)` lies in `d_{K̃/F̃}^{-1}`, checked at
    /// every spot where `t` can have a denominator (those over 2 and D).
    pub fn inverse_different_contains(&self, n: i128, m: i128) -> Result<bool> {
        let e = QuadElem::new(n, m, 1)?;
        let scale = rat(1, 2 * self.d as i128);
        for l in [2, self.d] {
            for spot in self.reflex.splitting(l)? {
                let v = self.reflex.ord_scaled(&e, &scale, &spot)?;
                if v + (self.rel_diff_exponent(&spot) as i64) < 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Display for CmField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::Branch;

    fn zeta5() -> CmField {
        CmField::build(5, QuadElem::new(-5, -1, 2).unwrap(), Mode::Strict).unwrap()
    }

    fn d41() -> CmField {
        CmField::build(5, QuadElem::new(-13, 1, 2).unwrap(), Mode::Strict).unwrap()
    }

    #[test]
    fn zeta5_field() {
        let k = zeta5();
        assert_eq!(k.dtilde, 5);
        assert_eq!(k.w_k, 10);
        assert!(is_valid_w(&k.base, &k.delta, &QuadElem::new(-1, 1, 2).unwrap()));
        assert_eq!(k.delta_tilde, QuadElem::new(-5, 2, 1).unwrap());
        let r5 = k.reflex.splitting(5).unwrap()[0];
        assert_eq!(k.relative_different(), &[(r5, 1)]);
    }

    #[test]
    fn zeta5_w_generates_integral_ring() {
        // ζ₅ = (w + √Δ)/2 with w = ζ₅ + ζ₅⁻¹ = (-1+√5)/2, its trace over F
        let k = zeta5();
        let w = QuadElem::new(-1, 1, 2).unwrap();
        // (w² - Δ)/4 must equal N_{K/F}(ζ₅) = 1
        let q = k.base.square(&w).sub(&k.delta).div_exact(4).unwrap();
        assert_eq!(q, QuadElem::from_int(1));
    }

    #[test]
    fn d41_field() {
        let k = d41();
        assert_eq!(k.dtilde, 41);
        assert_eq!(k.w_k, 2);
        assert!(is_valid_w(&k.base, &k.delta, &QuadElem::new(1, 1, 2).unwrap()));
        assert_eq!(k.delta_tilde, QuadElem::new(-13, 2, 1).unwrap());
        let rd = k.relative_different();
        assert_eq!(rd.len(), 1);
        let (spot, e) = rd[0];
        assert_eq!((spot.l, e), (5, 1));
        // root label ≡ -1 mod 5: -13 + 2r ≡ 0 mod 5
        let r = k.reflex.root_at(&spot, 1).unwrap();
        assert_eq!(small_residue(&r, 5), 4);
        assert_eq!(k.rel_diff_norm(), 5);
    }

    #[test]
    fn rejections() {
        let bad = |x, y, den, mode| CmField::build(5, QuadElem::new(x, y, den).unwrap(), mode);
        assert!(matches!(bad(-7, 1, 2, Mode::Strict), Err(Error::Rejected(_))));
        // totally negative fails: conjugate positive
        assert!(matches!(bad(-1, 3, 1, Mode::Strict), Err(Error::Rejected(_))));
        assert!(matches!(bad(-3, 0, 1, Mode::Strict), Err(Error::Rejected(_))));
        assert!(CmField::build(7, QuadElem::new(-3, 0, 1).unwrap(), Mode::Strict).is_err());
    }

    #[test]
    fn classification_over_two_and_eleven() {
        let k = d41();
        let spots = k.reflex.splitting(2).unwrap();
        let canonical = spots.iter().find(|s| s.branch == Some(Branch::Canonical)).unwrap();
        let other = spots.iter().find(|s| s.branch == Some(Branch::Conjugate)).unwrap();
        assert_eq!(k.classify_in_reflex_cm(canonical).unwrap(), SpotKind::Inert);
        assert_eq!(k.classify_in_reflex_cm(other).unwrap(), SpotKind::Split);
        let z = zeta5();
        for s in z.reflex.splitting(11).unwrap() {
            assert_eq!(z.classify_in_reflex_cm(&s).unwrap(), SpotKind::Split);
        }
    }

    #[test]
    fn zeta5_classification_agrees_with_cyclotomic_splitting() {
        // p splits in Q(ζ₅) with residue degree equal to the order of p mod 5
        let z = zeta5();
        for p in [2u64, 3, 7, 11, 13, 17, 19, 29, 31, 41, 61, 71] {
            let order = (1..=4).find(|&f| p.pow(f) % 5 == 1).unwrap();
            for s in z.reflex.splitting(p).unwrap() {
                let kind = z.classify_in_reflex_cm(&s).unwrap();
                let f_total = s.residue_degree() * if kind == SpotKind::Split { 1 } else { 2 };
                assert_eq!(f_total, order, "p = {p}");
            }
        }
    }

    #[test]
    fn ramified_spots_are_the_relative_different() {
        for k in [zeta5(), d41()] {
            for l in [2u64, 3, 5, 7, 11, 13, 41] {
                for s in k.reflex.splitting(l).unwrap() {
                    let ram = k.classify_in_reflex_cm(&s).unwrap() == SpotKind::Ramified;
                    assert_eq!(ram, k.rel_diff_exponent(&s) > 0, "{s}");
                }
            }
        }
    }

    #[test]
    fn classification_is_square_class_invariant() {
        let k = d41();
        let squares = [(1, 1, 2), (3, 1, 1), (2, 3, 1), (7, 1, 1), (5, 0, 1)];
        for (x, y, den) in squares {
            let s = QuadElem::new(x, y, den).unwrap();
            let twisted = k.reflex.mul(&k.delta_tilde, &k.reflex.square(&s));
            for l in [2u64, 3, 5, 7, 11, 23, 41] {
                for spot in k.reflex.splitting(l).unwrap() {
                    assert_eq!(
                        local_extension_type(&k.reflex, &twisted, &spot).unwrap(),
                        k.classify_in_reflex_cm(&spot).unwrap(),
                        "{spot} twisted by {s}"
                    );
                }
            }
        }
    }

    #[test]
    fn rho_examples() {
        let k = d41();
        assert_eq!(k.rho(&[]).unwrap(), 1);
        let spots = k.reflex.splitting(2).unwrap();
        let inert = spots.iter().find(|s| k.classify_in_reflex_cm(s).unwrap() == SpotKind::Inert).unwrap();
        let split = spots.iter().find(|s| k.classify_in_reflex_cm(s).unwrap() == SpotKind::Split).unwrap();
        assert_eq!(k.rho(&[(*inert, 1)]).unwrap(), 0);
        assert_eq!(k.rho(&[(*inert, 2)]).unwrap(), 1);
        assert_eq!(k.rho(&[(*split, 3)]).unwrap(), 4);
        assert_eq!(k.rho(&[(*split, 3), (*inert, 2)]).unwrap(), 4);
        assert_eq!(k.rho(&[(*split, -1)]).unwrap(), 0);
        let r5 = k.relative_different()[0].0;
        assert_eq!(k.rho(&[(r5, 5)]).unwrap(), 1);
    }

    #[test]
    fn spec_json_round_trip() {
        let s = r#"{"D": 5, "delta": {"x": -13, "y": 1, "den": 2}, "mode": "strict"}"#;
        let spec: FieldSpec = serde_json::from_str(s).unwrap();
        assert_eq!(CmField::from_spec(&spec).unwrap(), d41());
        let p: FieldSpec = serde_json::from_str(r#"{"D": 5, "delta": {"x": -13, "y": 1, "den": 2}}"#).unwrap();
        assert_eq!(p.mode, Mode::Strict);
    }
}

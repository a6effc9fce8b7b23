//! The coefficients `b_m(p)` and the intersection numbers `½·b_m`.
//!
//! Route (a) counts ideals directly: it enumerates `t = (n + m√D̃)/(2D)` in
//! the inverse different of `K̃/F̃` and sums `(ord_𝔭 t + 1)·ρ(t·d·𝔭⁻¹)` over
//! primes `𝔭` of `F̃` that do not split in `K̃`. Route (b) evaluates the
//! local-density product; it only applies when `m` is squarefree and prime
//! to `2DD̃p`, and is used to cross-check route (a).

use std::collections::BTreeSet;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{int, isqrt, ord_int, prime_divisors, rat};
use crate::cmfield::{CmField, Mode};
use crate::error::{bail_input, Error, Result};
use crate::localdensity::{b_l_factor, product_formula_guard, LocalFactorInput};
use crate::logcombo::LogCombo;
use crate::quadfield::{PrimeSpot, QuadElem, SpotKind};
use crate::tmatrix::{gap, mu_candidates, t_matrix};

/// Flag raised when `t` and its sign-flipped partner `(−n + m√D̃)/(2D)` both
/// lie in the inverse different although `D ∤ n`.
pub const DUAL_MEMBERSHIP: &str = "dual-membership";
/// Flag raised on permissive-mode fields, where the identity with the
/// intersection number is not a theorem.
pub const CONJECTURAL: &str = "conjectural";

/// An admissible `n` together with the ideal `t·d_{K̃/F̃}` as a valuation
/// vector (only nonzero exponents).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub n: i128,
    pub ideal: Vec<(PrimeSpot, i64)>,
}

/// Largest `n` with `n² < m²D̃`.
pub fn n_bound(field: &CmField, m: u64) -> i128 {
    let s = (m as i128).pow(2) * field.dtilde as i128;
    let r = isqrt(s);
    if r * r == s {
        r - 1
    } else {
        r
    }
}

/// All signed `n` with `t ∈ d_{K̃/F̃}⁻¹`, in increasing order of `n`.
pub fn members(field: &CmField, m: u64) -> Result<Vec<Member>> {
    if m == 0 {
        bail_input!("m must be positive");
    }
    let bound = n_bound(field, m);
    let four_d = 4 * field.d as i128;
    let scale = rat(1, 2 * field.d as i128);
    let mut out = Vec::new();
    for n in -bound..=bound {
        let g = gap(field, m, n.unsigned_abs() as u64);
        // N(t·d) = (m²D̃ − n²)/4D up to sign must be an integer
        if g % four_d != 0 {
            continue;
        }
        if !field.inverse_different_contains(n, m as i128)? {
            continue;
        }
        let e = QuadElem::new(n, m as i128, 1)?;
        let mut primes: BTreeSet<u64> = prime_divisors(g)?.into_iter().collect();
        primes.insert(2);
        primes.insert(field.d);
        let mut ideal = Vec::new();
        for l in primes {
            for spot in field.reflex.splitting(l)? {
                let v = field.reflex.ord_scaled(&e, &scale, &spot)?
                    + field.rel_diff_exponent(&spot) as i64;
                if v != 0 {
                    ideal.push((spot, v));
                }
            }
        }
        out.push(Member { n, ideal });
    }
    Ok(out)
}

/// Contribution of one member to the coefficient of `log p`.
pub fn member_contribution(field: &CmField, member: &Member, p: u64) -> Result<u64> {
    let mut total = 0;
    for (i, &(spot, v)) in member.ideal.iter().enumerate() {
        if spot.l != p || field.classify_in_reflex_cm(&spot)? == SpotKind::Split {
            continue;
        }
        let ord_t = v - field.rel_diff_exponent(&spot) as i64;
        if ord_t < 0 {
            continue;
        }
        let mut reduced = member.ideal.clone();
        reduced[i].1 -= 1;
        reduced.retain(|&(_, e)| e != 0);
        let rho = field.rho(&reduced)?;
        total += spot.residue_degree() as u64 * (ord_t as u64 + 1) * rho;
    }
    Ok(total)
}

/// `b_m(p)` by counting ideals.
pub fn bm_p_definition(field: &CmField, m: u64, p: u64) -> Result<u64> {
    members(field, m)?
        .iter()
        .map(|mb| member_contribution(field, mb, p))
        .sum()
}

/// `b_m(p)` by the local-density product, or `None` when its hypotheses fail.
pub fn bm_p_product(field: &CmField, m: u64, p: u64) -> Result<Option<u64>> {
    match product_formula_guard(field, m, p) {
        Ok(()) => {}
        Err(Error::Inapplicable(_)) => return Ok(None),
        Err(e) => return Err(e),
    }
    let four_d = 4 * field.d as i128;
    let mut total = 0u64;
    for n in 1..=n_bound(field, m) as u64 {
        let g = gap(field, m, n);
        if g % four_d != 0 {
            continue;
        }
        let big_n = g / four_d;
        let Some(ord_p) = ord_int(big_n, p).filter(|&e| e > 0) else {
            continue;
        };
        let divisors = prime_divisors(big_n)?;
        let mut inner = 0u64;
        for mu in mu_candidates(field, m, n)? {
            let t = t_matrix(field, m, n, mu)?
                .ok_or_else(|| Error::Internal(format!("admissible sign {mu} lost for m = {m}, n = {n}")))?;
            let mut prod = 1u64;
            for &l in &divisors {
                prod *= b_l_factor(&LocalFactorInput::new(field, &t, p, l))?;
                if prod == 0 {
                    break;
                }
            }
            inner += prod;
        }
        total += (ord_p as u64 + 1) * inner;
    }
    Ok(Some(total))
}

/// Route (b) result for one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteB {
    Value(u64),
    Inapplicable,
}

impl Serialize for RouteB {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RouteB::Value(v) => s.serialize_u64(*v),
            RouteB::Inapplicable => s.serialize_str("inapplicable"),
        }
    }
}

impl<'de> Deserialize<'de> for RouteB {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(RouteB::Value)
                .ok_or_else(|| D::Error::custom("route_b must be a nonnegative integer")),
            serde_json::Value::String(s) if s == "inapplicable" => Ok(RouteB::Inapplicable),
            other => Err(D::Error::custom(format!("unexpected route_b value {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NTerm {
    pub n: i128,
    pub b: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BmEntry {
    pub p: u64,
    pub b: u64,
    pub route_b: RouteB,
    pub per_n: Vec<NTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BmReport {
    #[serde(rename = "D")]
    pub d: u64,
    pub delta: QuadElem,
    pub m: u64,
    pub entries: Vec<BmEntry>,
    pub flags: Vec<String>,
}

impl BmReport {
    pub fn to_log_combo(&self) -> LogCombo {
        self.entries.iter().map(|e| (e.p, int(e.b as i128))).collect()
    }
}

/// Route (a) and route (b) side by side at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub p: u64,
    pub route_a: u64,
    pub route_b: RouteB,
    pub per_n: Vec<NTerm>,
}

/// Both routes at every prime route (a) can touch and every prime dividing
/// some `(m²D̃ − n²)/(4D)`. Fails with an internal error on disagreement.
pub fn compare_routes(field: &CmField, m: u64) -> Result<Vec<Comparison>> {
    let members = members(field, m)?;
    let mut candidates: BTreeSet<u64> = members
        .iter()
        .flat_map(|mb| mb.ideal.iter().map(|(s, _)| s.l))
        .collect();
    candidates.extend(support_primes(field, m)?);
    let mut out = Vec::new();
    for p in candidates {
        let mut per_n = Vec::new();
        let mut route_a = 0;
        for mb in &members {
            let c = member_contribution(field, mb, p)?;
            if c > 0 {
                per_n.push(NTerm { n: mb.n, b: c });
                route_a += c;
            }
        }
        let route_b = match bm_p_product(field, m, p)? {
            Some(v) if v != route_a => {
                return Err(Error::Internal(format!(
                    "routes disagree for {} m = {m} p = {p}: ideal count {route_a}, product formula {v}",
                    field.id()
                )))
            }
            Some(v) => RouteB::Value(v),
            None => RouteB::Inapplicable,
        };
        out.push(Comparison { p, route_a, route_b, per_n });
    }
    Ok(out)
}

fn dual_membership(field: &CmField, m: u64) -> Result<bool> {
    let passing: BTreeSet<i128> = members(field, m)?.iter().map(|mb| mb.n).collect();
    Ok(passing
        .iter()
        .any(|&n| n > 0 && passing.contains(&-n) && n % field.d as i128 != 0))
}

/// Full report for `b_m`: the nonzero route (a) values, each checked
/// against route (b) where that applies.
pub fn bm_report(field: &CmField, m: u64) -> Result<BmReport> {
    let mut flags = Vec::new();
    if field.mode == Mode::Permissive {
        flags.push(CONJECTURAL.to_string());
    }
    if dual_membership(field, m)? {
        flags.push(DUAL_MEMBERSHIP.to_string());
    }
    let entries = compare_routes(field, m)?
        .into_iter()
        .filter(|c| c.route_a > 0)
        .map(|c| BmEntry { p: c.p, b: c.route_a, route_b: c.route_b, per_n: c.per_n })
        .collect();
    Ok(BmReport { d: field.d, delta: field.delta, m, entries, flags })
}

/// `b_m = Σ_p b_m(p) log p`.
pub fn bm_full(field: &CmField, m: u64) -> Result<LogCombo> {
    Ok(bm_report(field, m)?.to_log_combo())
}

/// The intersection number `𝒯_m·CM(K) = ½·b_m`.
pub fn intersection_number(field: &CmField, m: u64) -> Result<LogCombo> {
    Ok(bm_full(field, m)?.scaled(rat(1, 2)))
}

/// Primes dividing some positive integer `(m²D̃ − n²)/(4D)`, `0 ≤ n < m√D̃`.
pub fn support_primes(field: &CmField, m: u64) -> Result<BTreeSet<u64>> {
    let four_d = 4 * field.d as i128;
    let mut out = BTreeSet::new();
    for n in 0..=n_bound(field, m) as u64 {
        let g = gap(field, m, n);
        if g % four_d == 0 && g / four_d > 1 {
            out.extend(prime_divisors(g / four_d)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmfield::Mode;

    fn zeta5() -> CmField {
        CmField::build(5, QuadElem::new(-5, -1, 2).unwrap(), Mode::Strict).unwrap()
    }

    fn d41() -> CmField {
        CmField::build(5, QuadElem::new(-13, 1, 2).unwrap(), Mode::Strict).unwrap()
    }

    #[test]
    fn worked_instance_both_routes() {
        let k = d41();
        let mb = members(&k, 1).unwrap();
        assert_eq!(mb.iter().map(|m| m.n).collect::<Vec<_>>(), vec![-1]);
        assert_eq!(bm_p_definition(&k, 1, 2).unwrap(), 2);
        assert_eq!(bm_p_product(&k, 1, 2).unwrap(), Some(2));
        assert_eq!(bm_full(&k, 1).unwrap(), LogCombo::single(2, int(2)));
        assert_eq!(intersection_number(&k, 1).unwrap(), LogCombo::single(2, int(1)));
    }

    #[test]
    fn zeta5_values() {
        let k = zeta5();
        assert!(bm_full(&k, 1).unwrap().is_empty());
        assert!(members(&k, 1).unwrap().is_empty());
        assert_eq!(bm_p_definition(&k, 7, 11).unwrap(), 0);
        assert_eq!(bm_p_product(&k, 7, 11).unwrap(), Some(0));
        for p in [2, 7, 11, 13] {
            assert_eq!(bm_p_product(&k, 3, p).unwrap(), Some(0));
            assert_eq!(bm_p_definition(&k, 3, p).unwrap(), 0);
        }
    }

    #[test]
    fn route_b_guards() {
        let k = d41();
        assert_eq!(bm_p_product(&k, 2, 3).unwrap(), None);
        assert_eq!(bm_p_product(&k, 9, 2).unwrap(), None);
        assert_eq!(bm_p_product(&k, 3, 3).unwrap(), None);
    }

    #[test]
    fn report_json_shape() {
        let r = bm_report(&d41(), 1).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["D"], 5);
        assert_eq!(v["m"], 1);
        assert_eq!(v["entries"][0]["p"], 2);
        assert_eq!(v["entries"][0]["b"], 2);
        assert_eq!(v["entries"][0]["route_b"], 2);
        assert_eq!(v["entries"][0]["per_n"][0]["n"], -1);
        let back: BmReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
        let e = serde_json::to_value(RouteB::Inapplicable).unwrap();
        assert_eq!(e, "inapplicable");
    }

    #[test]
    fn small_m_vanishes() {
        let k = zeta5();
        for m in 1..=2 {
            if (m * m * k.dtilde) <= 4 * k.d {
                assert!(bm_full(&k, m).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn routes_agree_on_small_sweep() {
        for k in [zeta5(), d41()] {
            for m in [1u64, 3, 7, 11, 13] {
                bm_report(&k, m).unwrap();
            }
        }
    }
}

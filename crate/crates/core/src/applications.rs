//! Consequences of the intersection formula: intersections with Humbert
//! surfaces, primes of bad reduction of CM genus-2 curves, and denominator
//! bounds for Igusa class polynomials.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::{int, is_square, rat, rational_string, Rational};
use crate::bm::bm_full;
use crate::cmfield::{CmField, Mode};
use crate::error::{bail_input, bail_internal, Error, Result};
use crate::logcombo::LogCombo;

fn require_strict(field: &CmField, what: &str) -> Result<()> {
    if field.mode != Mode::Strict {
        bail_input!("{what} needs a strict-mode field (D̃ prime), got {}", field.id());
    }
    Ok(())
}

/// The indices `(Dm − n²)/4` for `n > 0` at which they are positive integers.
pub fn humbert_indices(d: u64, m: u64) -> Vec<u64> {
    let dm = d as i128 * m as i128;
    (1..)
        .take_while(|n| n * n < dm)
        .filter(|n| (dm - n * n) % 4 == 0)
        .map(|n| ((dm - n * n) / 4) as u64)
        .collect()
}

/// `CM_S(K)·G_m = ½ Σ_{n>0} b_{(Dm−n²)/4}`.
pub fn humbert_intersection(field: &CmField, m: u64) -> Result<LogCombo> {
    if m == 0 {
        bail_input!("m must be positive");
    }
    if is_square(field.d as i128 * m as i128) {
        bail_input!("improper intersection: Dm = {} is a perfect square", field.d * m);
    }
    let mut total = LogCombo::new();
    for idx in humbert_indices(field.d, m) {
        total.add(&bm_full(field, idx)?);
    }
    Ok(total.scaled(rat(1, 2)))
}

/// The indices `(D − n²)/4`, odd `0 < n < √D`.
pub fn bad_reduction_indices(d: u64) -> Vec<u64> {
    humbert_indices(d, 1)
}

/// `S = Σ_{odd 0<n<√D} b_{(D−n²)/4}`.
pub fn bad_reduction_sum(field: &CmField) -> Result<LogCombo> {
    let mut total = LogCombo::new();
    for idx in bad_reduction_indices(field.d) {
        total.add(&bm_full(field, idx)?);
    }
    Ok(total)
}

mod rational_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        crate::arith::parse_rational(&raw).ok_or_else(|| serde::de::Error::custom("bad rational"))
    }
}

/// The primes at which some CM curve with CM by `O_K` can have bad reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadReductionCertificate {
    pub field: String,
    pub indices: Vec<u64>,
    pub totals: LogCombo,
    pub bad_primes: Vec<u64>,
    #[serde(with = "rational_str")]
    pub bound: Rational,
}

pub fn bad_reduction_primes(field: &CmField) -> Result<BadReductionCertificate> {
    require_strict(field, "bad_reduction_primes")?;
    let totals = bad_reduction_sum(field)?;
    let bound = rat(field.d as i128 * field.dtilde as i128, 64);
    let bad_primes: Vec<u64> = totals.primes().collect();
    if let Some(&l) = bad_primes.iter().find(|&&l| int(l as i128) > bound) {
        bail_internal!("bad prime {l} exceeds D·D̃/64 = {} for {}", rational_string(&bound), field.id());
    }
    Ok(BadReductionCertificate {
        field: field.id(),
        indices: bad_reduction_indices(field.d),
        totals,
        bad_primes,
        bound,
    })
}

/// Factored integers `A₁, A₂, A₃` with `A_i H_i ∈ Z[x]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IgusaBounds {
    #[serde(rename = "A1")]
    pub a1: LogCombo,
    #[serde(rename = "A2")]
    pub a2: LogCombo,
    #[serde(rename = "A3")]
    pub a3: LogCombo,
}

fn expand(c: &LogCombo) -> Result<BigUint> {
    let fact = c
        .as_factorization()
        .ok_or_else(|| Error::Internal(format!("non-integral exponent in {c}")))?;
    let mut out = BigUint::from(1u32);
    for (p, e) in fact {
        let e = u32::try_from(e).map_err(|_| Error::Internal(format!("negative or huge exponent {e} of {p}")))?;
        out *= BigUint::from(p).pow(e);
    }
    Ok(out)
}

impl IgusaBounds {
    /// `(A₁, A₂, A₃)` as integers. Only sensible for small fields.
    pub fn expanded(&self) -> Result<[BigUint; 3]> {
        Ok([expand(&self.a1)?, expand(&self.a2)?, expand(&self.a3)?])
    }

    pub fn factorizations(&self) -> Result<[BTreeMap<u64, i128>; 3]> {
        let f = |c: &LogCombo| {
            c.as_factorization()
                .ok_or_else(|| Error::Internal(format!("non-integral exponent in {c}")))
        };
        Ok([f(&self.a1)?, f(&self.a2)?, f(&self.a3)?])
    }
}

/// `A₁ = e^{3W_K·S}`, `A₂ = A₃ = e^{2W_K·S}`.
pub fn igusa_denominator_bounds(field: &CmField) -> Result<IgusaBounds> {
    require_strict(field, "igusa_denominator_bounds")?;
    let s = bad_reduction_sum(field)?;
    let w = field.w_k as i128;
    let bounds = IgusaBounds {
        a1: s.scaled(int(3 * w)),
        a2: s.scaled(int(2 * w)),
        a3: s.scaled(int(2 * w)),
    };
    bounds.factorizations()?;
    Ok(bounds)
}

/// Primes appearing in any of the constituent `b` of a Humbert intersection.
pub fn humbert_support(field: &CmField, m: u64) -> Result<BTreeSet<u64>> {
    let mut out = BTreeSet::new();
    for idx in humbert_indices(field.d, m) {
        out.extend(bm_full(field, idx)?.primes());
    }
    Ok(out)
}

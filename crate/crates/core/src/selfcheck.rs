//! Invariant suites and route-equality sweeps run by `cmint selfcheck`.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::applications::{bad_reduction_primes, humbert_intersection, igusa_denominator_bounds};
use crate::arith::{gcd, int, is_prime, is_squarefree, prime_divisors};
use crate::bm::{bm_full, bm_report, compare_routes, intersection_number, n_bound, RouteB};
use crate::cache::{Cache, CacheKey};
use crate::cmfield::{CmField, Mode};
use crate::error::{Error, Result};
use crate::localdensity::{b_l_factor, beta_l_factor, LocalFactorInput};
use crate::logcombo::LogCombo;
use crate::padic::kronecker;
use crate::quadfield::QuadElem;
use crate::sweep::fields;
use crate::tmatrix::{gap, mu_candidates, t_matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Small,
    Full,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfCheckReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl fmt::Display for SelfCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{status} {} ({} cases, {} ms) {}", c.name, c.cases, c.millis, c.detail)?;
        }
        Ok(())
    }
}

/// Outcome of one sweep: number of cases examined, first failure if any.
pub type Outcome = Result<(usize, Option<String>)>;

fn run(name: &str, f: impl FnOnce() -> Outcome) -> Check {
    let start = Instant::now();
    let (passed, cases, detail) = match f() {
        Ok((n, None)) => (true, n, String::new()),
        Ok((n, Some(msg))) => (false, n, msg),
        Err(e) => (false, 0, e.to_string()),
    };
    Check { name: name.into(), passed, cases, detail, millis: start.elapsed().as_millis() }
}

pub fn zeta5() -> CmField {
    CmField::build(5, QuadElem { x: -5, y: -1, den: 2 }, Mode::Strict).expect("ζ₅ field")
}

pub fn worked_field() -> CmField {
    CmField::build(5, QuadElem { x: -13, y: 1, den: 2 }, Mode::Strict).expect("D̃ = 41 field")
}

/// Squarefree `m ≤ max_m` prime to `2DD̃`: the indices where both routes apply.
pub fn product_indices(field: &CmField, max_m: u64) -> Result<Vec<u64>> {
    let modulus = 2 * field.d as i128 * field.dtilde as i128;
    let mut out = Vec::new();
    for m in 1..=max_m {
        if is_squarefree(m as i128)? && gcd(m as i128, modulus) == 1 {
            out.push(m);
        }
    }
    Ok(out)
}

/// The regression values of the `D = 5`, `D̃ = 41` field.
pub fn check_worked_instance() -> Outcome {
    let k = worked_field();
    let two = |c: i128| LogCombo::single(2, int(c));
    let cert = bad_reduction_primes(&k)?;
    let ig = igusa_denominator_bounds(&k)?;
    let got = [
        ("b_1", bm_full(&k, 1)? == two(2)),
        ("intersection", intersection_number(&k, 1)? == two(1)),
        ("humbert", humbert_intersection(&k, 1)? == two(1)),
        ("bad primes", cert.bad_primes == vec![2] && cert.bound == crate::arith::rat(205, 64)),
        ("A1", ig.a1 == two(12)),
        ("A2", ig.a2 == two(8)),
        ("A3", ig.a3 == two(8)),
    ];
    let failed: Vec<&str> = got.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    Ok((got.len(), (!failed.is_empty()).then(|| format!("mismatch in {}", failed.join(", ")))))
}

/// Route (a) against route (b) at every prime dividing some
/// `(m²D̃ − n²)/(4D)` and every prime route (a) touches, skipping `p | m`
/// where the product formula does not apply.
pub fn check_route_equality(ds: &[u64], max_dtilde: u64, max_m: u64, mode: Mode) -> Outcome {
    let mut cases = 0;
    for &d in ds {
        for k in fields(d, max_dtilde, mode)? {
            for m in product_indices(&k, max_m)? {
                let compared = match compare_routes(&k, m) {
                    Ok(c) => c,
                    Err(Error::Internal(msg)) => return Ok((cases, Some(msg))),
                    Err(e) => return Err(e),
                };
                cases += compared.iter().filter(|c| c.route_b != RouteB::Inapplicable).count();
            }
        }
    }
    Ok((cases, None))
}

/// `b_m = 0` whenever `m²D̃ ≤ 4D`.
pub fn check_vanishing(fs: &[CmField]) -> Outcome {
    let mut cases = 0;
    for k in fs {
        let mut m = 1;
        while m * m * k.dtilde <= 4 * k.d {
            cases += 1;
            if !bm_full(k, m)?.is_empty() {
                return Ok((cases, Some(format!("{} m = {m} nonzero", k.id()))));
            }
            m += 1;
        }
    }
    Ok((cases, None))
}

/// Every nonzero `b_m(p)` has `4Dp | m²D̃ − n²` for some `0 ≤ n < m√D̃`.
pub fn check_support(fs: &[CmField], max_m: u64) -> Outcome {
    let mut cases = 0;
    for k in fs {
        for m in 1..=max_m {
            for p in bm_full(k, m)?.primes() {
                cases += 1;
                let modulus = 4 * k.d as i128 * p as i128;
                if !(0..=n_bound(k, m) as u64).any(|n| gap(k, m, n) % modulus == 0) {
                    return Ok((cases, Some(format!("{} m = {m}: p = {p} outside support", k.id()))));
                }
            }
        }
    }
    Ok((cases, None))
}

/// `β_l = 2 b_l` at `l = p`, `β_l = b_l` elsewhere, for `m = q` an odd prime
/// split in `F` and prime to `D̃`.
pub fn check_beta_relation(fs: &[CmField], max_q: u64) -> Outcome {
    let mut cases = 0;
    for k in fs {
        for q in (3..=max_q).filter(|&q| is_prime(q)) {
            if kronecker(k.d as i128, q as i128)? != 1 || k.dtilde % q == 0 {
                continue;
            }
            for n in 1..=n_bound(k, q) as u64 {
                let g = gap(k, q, n);
                if g % (4 * k.d as i128) != 0 || g / (4 * k.d as i128) == 1 {
                    continue;
                }
                let divisors = prime_divisors(g / (4 * k.d as i128))?;
                for mu in mu_candidates(k, q, n)? {
                    let t = t_matrix(k, q, n, mu)?.expect("admissible sign");
                    for &p in divisors.iter().filter(|&&p| p != q) {
                        for &l in &divisors {
                            let b = b_l_factor(&LocalFactorInput::new(k, &t, p, l))?;
                            let beta = beta_l_factor(k, &t, q, p, l)?;
                            let want = if l == p { 2 * b } else { b };
                            cases += 1;
                            if beta != want {
                                return Ok((
                                    cases,
                                    Some(format!("{} {t} p = {p} l = {l}: β = {beta}, b = {b}", k.id())),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((cases, None))
}

/// Sign uniqueness and the defining identities of every admissible `T_m(μn)`.
pub fn check_tmatrices(fs: &[CmField], max_m: u64) -> Outcome {
    let mut cases = 0;
    for k in fs {
        for m in 1..=max_m {
            for n in 1..=n_bound(k, m) as u64 {
                if gap(k, m, n) % k.d as i128 != 0 {
                    continue;
                }
                let signs = mu_candidates(k, m, n)?;
                for mu in signs {
                    let t = t_matrix(k, m, n, mu)?.expect("admissible sign");
                    cases += 1;
                    let det_ok = t.det() == crate::arith::rat(gap(k, m, n), k.d as i128 * (m as i128).pow(2));
                    if !det_ok || t.a <= int(0) || t.det() <= int(0) {
                        return Ok((cases, Some(format!("{} {t}", k.id()))));
                    }
                }
            }
        }
    }
    Ok((cases, None))
}

/// Recomputes up to `sample` cached reports and compares them byte for byte.
pub fn check_cache(cache: &Cache, sample: usize) -> Outcome {
    let mut keys: Vec<&CacheKey> = cache.keys().collect();
    keys.sort_by_key(|k| (k.d, k.x, k.y, k.den, k.m));
    let step = (keys.len() / sample.max(1)).max(1);
    let mut cases = 0;
    for key in keys.into_iter().step_by(step).take(sample) {
        let field = match CmField::build(key.d, QuadElem::new(key.x, key.y, key.den)?, key.mode) {
            Ok(f) => f,
            Err(e) => return Ok((cases, Some(format!("cached key {key:?} no longer valid: {e}")))),
        };
        let fresh = serde_json::to_string(&bm_report(&field, key.m)?).expect("serializable");
        let cached = serde_json::to_string(cache.get(key).expect("listed key")).expect("serializable");
        cases += 1;
        if fresh != cached {
            return Ok((cases, Some(format!("stale cache entry for {} m = {}", field.id(), key.m))));
        }
    }
    Ok((cases, None))
}

pub fn run_suite(suite: Suite, cache: Option<&Cache>) -> Result<SelfCheckReport> {
    let (max_dtilde, max_m, ds): (u64, u64, &[u64]) = match suite {
        Suite::Small => (100, 15, &[5]),
        Suite::Full => (500, 30, &[5, 13, 17]),
    };
    let mut sweep = Vec::new();
    for &d in ds {
        sweep.extend(fields(d, max_dtilde, Mode::Strict)?);
    }
    let mut checks = vec![
        run("worked instance", check_worked_instance),
        run("zeta5 vanishing", || check_vanishing(&[zeta5()])),
        run("route equality", || check_route_equality(ds, max_dtilde, max_m, Mode::Strict)),
        run("vanishing law", || check_vanishing(&sweep)),
        run("support law", || check_support(&sweep, max_m.min(12))),
        run("local factor relation", || check_beta_relation(&sweep, max_m)),
        run("t-matrices", || check_tmatrices(&sweep, max_m.min(20))),
    ];
    if suite == Suite::Full {
        checks.push(run("route equality (permissive)", || {
            check_route_equality(ds, max_dtilde, max_m, Mode::Permissive)
        }));
    }
    if let Some(cache) = cache {
        checks.push(run("cache consistency", || check_cache(cache, 20)));
    }
    Ok(SelfCheckReport { passed: checks.iter().all(|c| c.passed), checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let report = run_suite(Suite::Small, None).unwrap();
        assert!(report.passed, "{report}");
        assert!(report.checks.iter().all(|c| c.cases > 0), "{report}");
    }
}

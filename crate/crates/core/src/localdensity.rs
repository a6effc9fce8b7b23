//! Closed-form local factors `b_l(p, μn, m)` of the product formula for
//! `b_m(p)`, and the local integrals `β_l` they are compared against when
//! `m = q` is a prime split in `F`.

use crate::arith::{gcd, int, is_squarefree, ord_rational, rat};
use crate::cmfield::CmField;
use crate::error::{bail_input, bail_internal, Error, Result};
use crate::padic::{hilbert, kronecker, residue_mod, small_residue, Place};
use crate::tmatrix::{gap, t_matrix, TMatrix};

/// Everything one local factor depends on.
#[derive(Debug, Clone, Copy)]
pub struct LocalFactorInput<'a> {
    pub field: &'a CmField,
    pub t: &'a TMatrix,
    pub p: u64,
    pub l: u64,
    /// `ord_l((m²D̃ − n²)/(4Dm²))`
    pub t_l: i64,
}

impl<'a> LocalFactorInput<'a> {
    pub fn new(field: &'a CmField, t: &'a TMatrix, p: u64, l: u64) -> Self {
        let t_l = t_exponent(field, t.m, t.n, l);
        LocalFactorInput { field, t, p, l, t_l }
    }
}

/// `ord_l((m²D̃ − n²)/(4Dm²))`.
pub fn t_exponent(field: &CmField, m: u64, n: u64, l: u64) -> i64 {
    let q = rat(gap(field, m, n), 4 * field.d as i128 * (m as i128).pow(2));
    ord_rational(&q, l).expect("n < m√D̃")
}

fn form_value(t: &TMatrix, x: i128, y: i128, l: u64, k: u32) -> Result<u64> {
    let v = t.eval(x, y);
    let modulus = (l as u128).pow(k) as u64;
    Ok(small_residue(&residue_mod(&v, l, k)?, modulus))
}

/// A unit value of `a x² + 2b xy + c y²` over `Z_l`: a residue mod `l` for
/// odd `l`, mod 8 for `l = 2`. Only its square class is meaningful.
pub fn alpha_l(t: &TMatrix, l: u64) -> Result<u64> {
    if t.entries().iter().any(|e| ord_rational(e, l).is_some_and(|v| v < 0)) {
        bail_input!("{t} is not {l}-integral");
    }
    let k = if l == 2 { 3 } else { 1 };
    let m = (l as i128).pow(k);
    let mut candidates = vec![(1, 0), (0, 1), (1, 1), (1, -1)];
    if m <= 64 {
        candidates.extend((0..m).flat_map(|x| (0..m).map(move |y| (x, y))));
    }
    for (x, y) in candidates {
        if x % l as i128 == 0 && y % l as i128 == 0 {
            continue;
        }
        let r = form_value(t, x, y, l, k)?;
        if r % l != 0 {
            return Ok(r);
        }
    }
    bail_internal!("{t} represents no {l}-adic unit")
}

/// `(−α_l, l)_l`.
pub fn alpha_symbol(t: &TMatrix, l: u64) -> Result<i8> {
    let alpha = alpha_l(t, l)?;
    hilbert(&int(-(alpha as i128)), &int(l as i128), Place::Prime(l))
}

fn pow_sign(h: i8, e: i64) -> i8 {
    if e % 2 == 0 {
        1
    } else {
        h
    }
}

/// Checks the hypotheses under which the product formula holds:
/// `m` squarefree and `gcd(m, 2·D·D̃·p) = 1`.
pub fn product_formula_guard(field: &CmField, m: u64, p: u64) -> Result<()> {
    let m_i = m as i128;
    if !is_squarefree(m_i)? {
        return Err(Error::Inapplicable(format!("m = {m} is not squarefree")));
    }
    let modulus = 2 * field.d as i128 * field.dtilde as i128 * p as i128;
    if gcd(m_i, modulus) != 1 {
        return Err(Error::Inapplicable(format!("gcd(m, 2DD̃p) ≠ 1 for m = {m}, p = {p}")));
    }
    Ok(())
}

/// `T_{m/l}(μn/l)`, the matrix whose unit values give `α_l` when `l | m`.
fn rescaled(field: &CmField, t: &TMatrix, l: u64) -> Result<TMatrix> {
    if t.m % l != 0 || t.n % l != 0 {
        bail_internal!("{l} does not divide both m and n in {t}");
    }
    t_matrix(field, t.m / l, t.n / l, t.mu)?
        .ok_or_else(|| Error::Internal(format!("T_(m/l)(μn/l) inadmissible for {t}, l = {l}")))
}

/// The local factor `b_l(p, μn, m)`.
pub fn b_l_factor(input: &LocalFactorInput<'_>) -> Result<u64> {
    let LocalFactorInput { field, t, p, l, t_l } = *input;
    product_formula_guard(field, t.m, p)?;
    let big_n = gap(field, t.m, t.n);
    if big_n % (4 * field.d as i128) != 0 || (big_n / (4 * field.d as i128)) % l as i128 != 0 {
        return Err(Error::Inapplicable(format!("{l} does not divide (m²D̃ − n²)/4D for {t}")));
    }
    if t.m % l != 0 {
        let h = alpha_symbol(t, l)?;
        return Ok(if l == p {
            u64::from(pow_sign(h, t_l) == -1)
        } else if h == 1 {
            (t_l + 1) as u64
        } else {
            u64::from(t_l % 2 == 0)
        });
    }
    match t_l {
        0 => Ok(if field.splits_completely_in_closure(l)? {
            4
        } else if field.inert_then_split_in_reflex(l)? {
            2
        } else {
            0
        }),
        t_l if t_l > 0 => {
            let h = alpha_symbol(&rescaled(field, t, l)?, l)?;
            match kronecker(field.d as i128, l as i128)? {
                1 => Ok(if h == -1 { 0 } else { 2 * (t_l as u64 + 2) }),
                -1 => Ok(if h == -1 { (1 - pow_sign(-1, t_l)) as u64 } else { 0 }),
                _ => bail_internal!("{l} | m ramifies in F despite the gcd guard"),
            }
        }
        _ => bail_internal!("t_{l} = {t_l} < 0 although l | (m²D̃ − n²)/4D"),
    }
}

/// The local integral `β_l(T_q(μn))` for `m = q` an odd prime split in `F`.
pub fn beta_l_factor(field: &CmField, t: &TMatrix, q: u64, p: u64, l: u64) -> Result<u64> {
    if t.m != q {
        bail_input!("β_l needs T_q, got m = {}", t.m);
    }
    if q == 2 || !crate::arith::is_prime(q) || kronecker(field.d as i128, q as i128)? != 1 {
        bail_input!("q = {q} must be an odd prime split in F");
    }
    if p == q {
        bail_input!("β_l needs p ≠ q");
    }
    let t_l = t_exponent(field, q, t.n, l);
    if l != q {
        let h = alpha_symbol(t, l)?;
        return Ok(if l == p {
            (1 - pow_sign(h, t_l)) as u64
        } else if h == 1 {
            (t_l + 1) as u64
        } else {
            u64::from(t_l % 2 == 0)
        });
    }
    if t.n % q != 0 {
        return Ok(1);
    }
    if t_l == 0 {
        return Ok(if field.splits_completely_in_reflex(q)? {
            4
        } else if field.inert_then_split_in_reflex(q)? {
            2
        } else {
            0
        });
    }
    let h = alpha_symbol(&rescaled(field, t, q)?, q)?;
    Ok(if h == -1 { 0 } else { 2 * (t_l as u64 + 2) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmfield::Mode;
    use crate::arith::Rational;
    use crate::padic::legendre;
    use crate::quadfield::QuadElem;

    fn rational_ord(x: &Rational, l: u64) -> i64 {
        ord_rational(x, l).expect("nonzero")
    }

    fn d41() -> CmField {
        CmField::build(5, QuadElem::new(-13, 1, 2).unwrap(), Mode::Strict).unwrap()
    }

    fn t24() -> TMatrix {
        t_matrix(&d41(), 1, 1, 1).unwrap().unwrap()
    }

    #[test]
    fn alpha_examples() {
        let t = t24();
        assert_eq!(alpha_l(&t, 2).unwrap(), 3);
        // a = 24 ≡ 4 mod 5 is a square unit
        let a5 = alpha_l(&t, 5).unwrap();
        assert_eq!(a5, 4);
        assert_eq!(legendre(a5 as i128, 5).unwrap(), 1);
        let diag = TMatrix { a: int(1), b: int(0), c: int(7), m: 1, n: 1, mu: 1 };
        assert_eq!(alpha_l(&diag, 5).unwrap(), 1);
    }

    #[test]
    fn worked_local_factor() {
        let k = d41();
        let t = t24();
        let input = LocalFactorInput::new(&k, &t, 2, 2);
        assert_eq!(input.t_l, 1);
        assert_eq!(alpha_symbol(&t, 2).unwrap(), -1);
        assert_eq!(b_l_factor(&input).unwrap(), 1);
    }

    #[test]
    fn guard_violations_are_inapplicable() {
        let k = d41();
        assert!(matches!(product_formula_guard(&k, 2, 3), Err(Error::Inapplicable(_))));
        assert!(matches!(product_formula_guard(&k, 4, 3), Err(Error::Inapplicable(_))));
        assert!(matches!(product_formula_guard(&k, 3, 3), Err(Error::Inapplicable(_))));
        assert!(product_formula_guard(&k, 3, 2).is_ok());
        let t = t24();
        // 3 does not divide (41 − 1)/20 = 2
        let input = LocalFactorInput::new(&k, &t, 2, 3);
        assert!(matches!(b_l_factor(&input), Err(Error::Inapplicable(_))));
    }

    #[test]
    fn alpha_square_class_is_search_independent() {
        // every primitive unit value of T has the same Hilbert symbol when l | det
        let k = d41();
        for m in [1u64, 3, 7] {
            for n in 1..(m as i128 * 7) as u64 {
                let g = gap(&k, m, n);
                if g <= 0 || g % 20 != 0 {
                    continue;
                }
                for mu in crate::tmatrix::mu_candidates(&k, m, n).unwrap() {
                    let t = t_matrix(&k, m, n, mu).unwrap().unwrap();
                    for l in crate::arith::prime_divisors(g / 20).unwrap() {
                        if m % l == 0 {
                            continue;
                        }
                        let want = alpha_symbol(&t, l).unwrap();
                        let md = if l == 2 { 8 } else { l as i128 };
                        for x in 0..md {
                            for y in 0..md {
                                if x % l as i128 == 0 && y % l as i128 == 0 {
                                    continue;
                                }
                                let v = t.eval(x, y);
                                if rational_ord(&v, l) != 0 {
                                    continue;
                                }
                                let h = hilbert(&-v, &int(l as i128), Place::Prime(l)).unwrap();
                                assert_eq!(h, want, "{t} at ({x},{y}) mod {l}");
                            }
                        }
                    }
                }
            }
        }
    }
}

//! The field K = Q(√5)(√Δ) with Δ = (−13 + √5)/2, whose reflex field has
//! real quadratic subfield Q(√41): every quantity the library computes,
//! end to end.

use cmint::applications::{bad_reduction_primes, humbert_intersection, igusa_denominator_bounds};
use cmint::bm::{bm_report, intersection_number};
use cmint::cmfield::{CmField, Mode};
use cmint::quadfield::QuadElem;

pub fn main() -> Result<(), cmint::error::Error> {
    let field = CmField::build(5, QuadElem::new(-13, 1, 2)?, Mode::Strict)?;
    println!("field: {field}");
    println!("reflex generator Δ̃ = {}, W_K = {}", field.delta_tilde, field.w_k);

    let report = bm_report(&field, 1)?;
    for e in &report.entries {
        let terms: Vec<String> = e.per_n.iter().map(|t| format!("n={}: {}", t.n, t.b)).collect();
        println!("b_1({}) = {}  [{}]", e.p, e.b, terms.join(", "));
    }
    println!("T_1 . CM(K) = {}", intersection_number(&field, 1)?);
    println!("CM_S(K) . G_1 = {}", humbert_intersection(&field, 1)?);

    let cert = bad_reduction_primes(&field)?;
    println!("bad primes {:?} (bound D·D̃/64 = {})", cert.bad_primes, cert.bound);

    let bounds = igusa_denominator_bounds(&field)?;
    let [a1, a2, a3] = bounds.expanded()?;
    println!("A1 = {a1}, A2 = {a2}, A3 = {a3}");
    Ok(())
}

//! Validated CM fields for a fixed D, one entry per orbit of Δ under the
//! totally positive unit, with their reflex discriminants.

use cmint::cmfield::Mode;
use cmint::sweep::{fields, totally_positive_unit};

pub fn main() -> Result<(), cmint::error::Error> {
    let mut args = std::env::args().skip(1);
    let d: u64 = args.next().map_or(17, |s| s.parse().expect("D"));
    let max_dtilde: u64 = args.next().map_or(300, |s| s.parse().expect("max D̃"));
    run(d, max_dtilde)
}

pub fn run(d: u64, max_dtilde: u64) -> Result<(), cmint::error::Error> {
    let (a, b) = totally_positive_unit(d)?;
    println!("ε₊ = ({a} + {b}√{d})/2");
    let strict = fields(d, max_dtilde, Mode::Strict)?;
    let permissive = fields(d, max_dtilde, Mode::Permissive)?;
    for k in &permissive {
        let tag = if strict.iter().any(|s| s.id() == k.id()) { "strict" } else { "permissive only" };
        println!("{:<40} W_K = {}  {tag}", k.id(), k.w_k);
    }
    println!("{} strict, {} permissive", strict.len(), permissive.len());
    Ok(())
}

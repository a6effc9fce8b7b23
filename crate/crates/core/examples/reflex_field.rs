//! Reflex data of a quartic CM field and the splitting of small primes in
//! the reflex tower Q ⊂ F̃ ⊂ K̃.

use cmint::cmfield::{CmField, Mode};
use cmint::quadfield::QuadElem;

pub fn main() -> Result<(), cmint::error::Error> {
    run(std::env::args().nth(1).map_or(5, |s| s.parse().expect("D")))
}

pub fn run(d: u64) -> Result<(), cmint::error::Error> {
    let (x, y, den) = match d {
        5 => (-13, 1, 2),
        13 => (-29, 3, 2),
        _ => panic!("pass 5 or 13"),
    };
    let field = CmField::build(d, QuadElem::new(x, y, den)?, Mode::Permissive)?;
    println!("{field}  (mode {})", field.mode);
    println!("w = {} generates O_K over O_F", field.w);
    println!("Δ̃ = {} in Q(√{})", field.delta_tilde, field.dtilde);
    for (spot, e) in field.relative_different() {
        println!("relative different: {spot}^{e}");
    }
    for l in [2u64, 3, 7, 11, 13, 19, 23, 29, 31] {
        let mut kinds = Vec::new();
        for spot in field.reflex.splitting(l)? {
            kinds.push(format!("{spot}: {:?}", field.classify_in_reflex_cm(&spot)?));
        }
        println!("l = {l:2}  {}", kinds.join(", "));
    }
    Ok(())
}

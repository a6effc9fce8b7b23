//! Humbert surface intersections and bad-reduction primes for all strict
//! fields of a given D.

use cmint::applications::{bad_reduction_primes, humbert_intersection};
use cmint::cmfield::Mode;
use cmint::sweep::fields;

pub fn main() -> Result<(), cmint::error::Error> {
    run(std::env::args().nth(1).map_or(13, |s| s.parse().expect("D")))
}

pub fn run(d: u64) -> Result<(), cmint::error::Error> {
    for field in fields(d, 150, Mode::Strict)? {
        let cert = bad_reduction_primes(&field)?;
        println!("{field}: bad primes {:?} ≤ {}", cert.bad_primes, cert.bound);
        for m in 1..=3 {
            match humbert_intersection(&field, m) {
                Ok(c) => println!("    G_{m}: {c}"),
                Err(e) => println!("    G_{m}: {e}"),
            }
        }
    }
    Ok(())
}

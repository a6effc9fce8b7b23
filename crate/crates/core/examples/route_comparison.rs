//! Both evaluations of b_m(p), ideal counting and the local-density product,
//! over every field of a given D with bounded D̃.

use cmint::bm::{compare_routes, RouteB};
use cmint::cmfield::Mode;
use cmint::selfcheck::product_indices;
use cmint::sweep::fields;

pub fn main() -> Result<(), cmint::error::Error> {
    let mut args = std::env::args().skip(1);
    let d: u64 = args.next().map_or(13, |s| s.parse().expect("D"));
    let max_dtilde: u64 = args.next().map_or(200, |s| s.parse().expect("max D̃"));
    let max_m: u64 = args.next().map_or(15, |s| s.parse().expect("max m"));
    run(d, max_dtilde, max_m)
}

pub fn run(d: u64, max_dtilde: u64, max_m: u64) -> Result<(), cmint::error::Error> {
    let (mut agree, mut skipped) = (0, 0);
    for field in fields(d, max_dtilde, Mode::Strict)? {
        for m in product_indices(&field, max_m)? {
            for row in compare_routes(&field, m)? {
                match row.route_b {
                    RouteB::Value(_) => agree += 1,
                    RouteB::Inapplicable => skipped += 1,
                }
                if row.route_a > 0 {
                    println!("{field}  m = {m:2}  b_m({}) = {}", row.p, row.route_a);
                }
            }
        }
    }
    println!("{agree} primes where both routes agree, {skipped} where the product formula does not apply");
    Ok(())
}

//! Legendre, Kronecker and Hilbert symbols, local square tests and Hensel
//! square roots.

use cmint::arith::{int, rat};
use cmint::padic::{hensel_sqrt, hilbert, is_square_ql, kronecker, legendre, ord, Place};

pub fn main() -> Result<(), cmint::error::Error> {
    println!("(2/7) = {}, (3/7) = {}", legendre(2, 7)?, legendre(3, 7)?);
    println!("kronecker(5, 2) = {}, kronecker(41, 2) = {}", kronecker(5, 2)?, kronecker(41, 2)?);

    let (a, b) = (int(-3), int(2));
    for place in [Place::Prime(2), Place::Prime(3), Place::Infinity] {
        println!("({a}, {b}) at {place:?} = {}", hilbert(&a, &b, place)?);
    }

    let x = rat(-7, 9);
    println!("ord_3({x}) = {}, square in Q_2: {}", ord(&x, 3), is_square_ql(&x, 2)?);

    // √41 in Z_2 and Z_5, to increasing precision; the lifts are compatible
    for l in [2u64, 5] {
        for k in [3u32, 6, 12] {
            match hensel_sqrt(&int(41), l, k)? {
                Some(r) => println!("√41 mod {l}^{k} = {r}"),
                None => println!("41 is not a square in Z_{l}"),
            }
        }
    }
    Ok(())
}

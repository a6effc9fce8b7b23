//! Denominator bounds for the Igusa class polynomials, printed factored.

use cmint::applications::igusa_denominator_bounds;
use cmint::cmfield::Mode;
use cmint::sweep::fields;

pub fn main() -> Result<(), cmint::error::Error> {
    for d in [5u64, 13] {
        for field in fields(d, 120, Mode::Strict)? {
            let b = igusa_denominator_bounds(&field)?;
            println!("{field}  W_K = {}", field.w_k);
            println!("    A1 = exp({})", b.a1);
            println!("    A2 = A3 = exp({})", b.a2);
        }
    }
    Ok(())
}

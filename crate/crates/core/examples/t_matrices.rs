//! The positive definite forms T_m(μn) and their local invariants.

use cmint::cmfield::{CmField, Mode};
use cmint::localdensity::{alpha_l, alpha_symbol, b_l_factor, LocalFactorInput};
use cmint::quadfield::QuadElem;
use cmint::tmatrix::{gap, mu_candidates, t_matrix};

pub fn main() -> Result<(), cmint::error::Error> {
    let zeta5 = CmField::build(5, QuadElem::new(-5, -1, 2)?, Mode::Strict)?;
    for mu in mu_candidates(&zeta5, 3, 5)? {
        let t = t_matrix(&zeta5, 3, 5, mu)?.expect("admissible");
        println!("{t}, det {}", t.det());
    }

    let field = CmField::build(5, QuadElem::new(-13, 1, 2)?, Mode::Strict)?;
    let m = 3;
    for n in 1..20u64 {
        let g = gap(&field, m, n);
        if g <= 0 || g % 20 != 0 {
            continue;
        }
        let big_n = g / 20;
        for mu in mu_candidates(&field, m, n)? {
            let t = t_matrix(&field, m, n, mu)?.expect("admissible");
            let mut local = Vec::new();
            for l in cmint::arith::prime_divisors(big_n)? {
                let input = LocalFactorInput::new(&field, &t, 2, l);
                local.push(format!(
                    "l={l}: α={} h={} b_l={}",
                    alpha_l(&t, l)?,
                    alpha_symbol(&t, l)?,
                    b_l_factor(&input)?
                ));
            }
            println!("{t}  N = {big_n}  {}", local.join("; "));
        }
    }
    Ok(())
}

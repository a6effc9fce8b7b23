//! Enumeration of admissible `Δ` for a fixed real quadratic field, up to
//! multiplication by totally positive units.

use crate::arith::{is_square, isqrt};
use crate::cmfield::{CmField, Mode};
use crate::error::{bail_input, Error, Result};
use crate::quadfield::QuadElem;

/// `(a, b)` standing for `(a + b√D)/2`.
type Half = (i128, i128);

fn mul_half(d: i128, (x, y): Half, (a, b): Half) -> Half {
    ((x * a + d * y * b) / 2, (x * b + y * a) / 2)
}

/// The smallest totally positive unit `ε₊ > 1` of `Q(√D)` as `(a, b)` with
/// `ε₊ = (a + b√D)/2`.
pub fn totally_positive_unit(d: u64) -> Result<Half> {
    let d = d as i128;
    for b in 1..1_000_000i128 {
        for target in [4 + d * b * b, d * b * b - 4] {
            if target > 0 && is_square(target) {
                let a = isqrt(target);
                let unit = (a, b);
                return Ok(if target == d * b * b - 4 {
                    mul_half(d, unit, unit)
                } else {
                    unit
                });
            }
        }
    }
    Err(Error::Resource(format!("fundamental unit of Q(√{d}) not found")))
}

fn key((x, y): Half) -> (i128, i128) {
    (x.abs(), -y)
}

/// Every canonical `Δ` with `D̃ = N(Δ) ≤ max_dtilde` that builds a valid CM
/// field in the given mode, sorted by `D̃`. Each orbit under `ε₊` is
/// represented by its element of smallest trace; `Δ` and `Δ'` are kept as
/// separate entries.
pub fn fields(d: u64, max_dtilde: u64, mode: Mode) -> Result<Vec<CmField>> {
    if d % 4 != 1 {
        bail_input!("D = {d} must be ≡ 1 mod 4");
    }
    let eps = totally_positive_unit(d)?;
    let eps_inv = (eps.0, -eps.1);
    let di = d as i128;
    let x_max = isqrt(4 * max_dtilde as i128 * (eps.0 + 2)) + 1;
    let mut out = Vec::new();
    for neg_x in 1..=x_max {
        let x = -neg_x;
        let y_max = isqrt(x * x / di) + 1;
        for y in -y_max..=y_max {
            if (x - y) % 2 != 0 || y * y * di >= x * x {
                continue;
            }
            let norm4 = x * x - di * y * y;
            if norm4 % 4 != 0 || norm4 / 4 > max_dtilde as i128 {
                continue;
            }
            let here = (x, y);
            if key(mul_half(di, here, eps)) < key(here) || key(mul_half(di, here, eps_inv)) < key(here) {
                continue;
            }
            let delta = QuadElem::new(x, y, 2)?;
            match CmField::build(d, delta, mode) {
                Ok(f) => out.push(f),
                Err(Error::Rejected(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    out.sort_by_key(|f| (f.dtilde, f.delta.x.abs(), -f.delta.y));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units() {
        // ε = (1+√5)/2, ε² = (3+√5)/2
        assert_eq!(totally_positive_unit(5).unwrap(), (3, 1));
        // ε = (3+√13)/2 has norm −1
        assert_eq!(totally_positive_unit(13).unwrap(), (11, 3));
        // ε = 4+√17 has norm −1, ε² = 33 + 8√17
        assert_eq!(totally_positive_unit(17).unwrap(), (66, 16));
    }

    #[test]
    fn d5_contains_known_fields() {
        let fs = fields(5, 50, Mode::Strict).unwrap();
        let ids: Vec<_> = fs.iter().map(|f| (f.dtilde, f.delta)).collect();
        assert!(ids.contains(&(5, QuadElem::new(-5, -1, 2).unwrap()) ) || ids.contains(&(5, QuadElem::new(-5, 1, 2).unwrap())));
        assert!(ids.contains(&(41, QuadElem::new(-13, 1, 2).unwrap())));
        for f in &fs {
            assert!(f.dtilde <= 50);
        }
    }

    #[test]
    fn representatives_are_distinct_orbits() {
        let fs = fields(13, 300, Mode::Permissive).unwrap();
        let eps = totally_positive_unit(13).unwrap();
        for f in &fs {
            let h = (f.delta.x * 2 / f.delta.den, f.delta.y * 2 / f.delta.den);
            let up = mul_half(13, h, eps);
            assert!(fs.iter().all(|g| (g.delta.x * 2 / g.delta.den, g.delta.y * 2 / g.delta.den) != up));
        }
    }
}

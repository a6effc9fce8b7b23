//! The positive definite forms `T_m(μn) = [[a, b], [b, c]] ∈ (1/m) Sym₂(Z)`
//! attached to an index `m` and an integer `0 < n < m√D̃`.
//!
//! With `Δ = Δ₀ + Δ₁√D` and `n₁ = n/m` the entries solve
//!
//! ```text
//! c = (2μn₁ − 2Δ₀)/D,   b = (−2Δ₁ − Dc)/2,   a = −μn₁ − Db − (D² − D)c/4
//! ```
//!
//! and the matrix is admissible when it is `m`-integral and positive definite
//! with `det = (m²D̃ − n²)/(Dm²)`.

use std::fmt;

use crate::arith::{int, rat, Rational};
use crate::cmfield::CmField;
use crate::error::{bail_input, bail_internal, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TMatrix {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub m: u64,
    pub n: u64,
    pub mu: i8,
}

impl TMatrix {
    pub fn det(&self) -> Rational {
        self.a * self.c - self.b * self.b
    }

    pub fn entries(&self) -> [Rational; 3] {
        [self.a, self.b, self.c]
    }

    /// Value of the form `a x² + 2b xy + c y²`.
    pub fn eval(&self, x: i128, y: i128) -> Rational {
        self.a * int(x * x) + self.b * int(2 * x * y) + self.c * int(y * y)
    }

    pub fn scaled(&self, k: Rational) -> [Rational; 3] {
        [self.a * k, self.b * k, self.c * k]
    }
}

impl fmt::Display for TMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.mu > 0 { "" } else { "-" };
        write!(f, "T_{}({sign}{}) = [[{}, {}], [{}, {}]]", self.m, self.n, self.a, self.b, self.b, self.c)
    }
}

/// `(m²D̃ − n²)`, the quantity every index condition is phrased in.
pub fn gap(field: &CmField, m: u64, n: u64) -> i128 {
    (m as i128).pow(2) * field.dtilde as i128 - (n as i128).pow(2)
}

fn check_range(field: &CmField, m: u64, n: u64) -> Result<()> {
    if m == 0 || n == 0 {
        bail_input!("need m ≥ 1 and n ≥ 1, got m = {m}, n = {n}");
    }
    if gap(field, m, n) <= 0 {
        bail_input!("n = {n} is not below m√D̃ for m = {m}, D̃ = {}", field.dtilde);
    }
    Ok(())
}

/// Solves the defining linear system for the sign `mu` and returns the matrix
/// when every admissibility constraint holds.
pub fn t_matrix(field: &CmField, m: u64, n: u64, mu: i8) -> Result<Option<TMatrix>> {
    check_range(field, m, n)?;
    if mu != 1 && mu != -1 {
        bail_input!("mu must be ±1");
    }
    let d = int(field.d as i128);
    let (delta0, delta1) = field.delta_coords();
    let n1 = rat(mu as i128 * n as i128, m as i128);
    let c = (int(2) * n1 - int(2) * delta0) / d;
    let b = (int(-2) * delta1 - d * c) / int(2);
    let a = -n1 - d * b - (d * d - d) / int(4) * c;
    let t = TMatrix { a, b, c, m, n, mu };
    Ok(admissible(field, &t).then_some(t))
}

fn admissible(field: &CmField, t: &TMatrix) -> bool {
    let m = int(t.m as i128);
    let d = int(field.d as i128);
    let n1 = rat(t.mu as i128 * t.n as i128, t.m as i128);
    let integral = t.entries().iter().all(|x| (x * m).is_integer());
    let det_ok = t.det() == rat(gap(field, t.m, t.n), field.d as i128 * (t.m as i128).pow(2));
    let congruences = (int(2) * n1 - d * t.c).is_integer() && (int(2) * t.b + d * t.c).is_integer();
    integral && det_ok && congruences && t.a > int(0) && t.det() > int(0)
}

/// The admissible signs: both when `D | n`, otherwise exactly one.
pub fn mu_candidates(field: &CmField, m: u64, n: u64) -> Result<Vec<i8>> {
    check_range(field, m, n)?;
    if gap(field, m, n) % field.d as i128 != 0 {
        bail_input!("(m²D̃ − n²)/D is not an integer for m = {m}, n = {n}");
    }
    let mut out = Vec::new();
    for mu in [1, -1] {
        if t_matrix(field, m, n, mu)?.is_some() {
            out.push(mu);
        }
    }
    let expected = if n % field.d == 0 { 2 } else { 1 };
    if out.len() != expected {
        bail_internal!(
            "{} admissible signs for m = {m}, n = {n} in {} (expected {expected})",
            out.len(),
            field.id()
        );
    }
    Ok(out)
}

//! Exact formal sums `Σ c_p log p`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{int, parse_rational, rational_string, Rational};

/// A finite map `prime -> exponent` standing for `Σ c_p log p`.
///
/// Zero exponents are never stored, so two combos are equal iff they denote
/// the same real number (logs of distinct primes are linearly independent).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LogCombo(BTreeMap<u64, Rational>);

impl LogCombo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(p: u64, c: Rational) -> Self {
        let mut out = Self::new();
        out.add_term(p, c);
        out
    }

    pub fn add_term(&mut self, p: u64, c: Rational) {
        let entry = self.0.entry(p).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&p);
        }
    }

    pub fn add(&mut self, other: &LogCombo) {
        for (&p, &c) in &other.0 {
            self.add_term(p, c);
        }
    }

    pub fn scaled(&self, k: Rational) -> LogCombo {
        let mut out = LogCombo::new();
        for (&p, &c) in &self.0 {
            out.add_term(p, c * k);
        }
        out
    }

    pub fn coefficient(&self, p: u64) -> Rational {
        self.0.get(&p).copied().unwrap_or_else(Rational::zero)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Rational)> + '_ {
        self.0.iter().map(|(&p, &c)| (p, c))
    }

    /// Interprets the combo as the logarithm of a positive rational and
    /// returns its factorization, provided every exponent is an integer.
    pub fn as_factorization(&self) -> Option<BTreeMap<u64, i128>> {
        self.0
            .iter()
            .map(|(&p, c)| c.is_integer().then(|| (p, c.to_integer())))
            .collect()
    }
}

impl FromIterator<(u64, Rational)> for LogCombo {
    fn from_iter<I: IntoIterator<Item = (u64, Rational)>>(iter: I) -> Self {
        let mut out = LogCombo::new();
        for (p, c) in iter {
            out.add_term(p, c);
        }
        out
    }
}

impl From<BTreeMap<u64, u64>> for LogCombo {
    fn from(map: BTreeMap<u64, u64>) -> Self {
        map.into_iter().map(|(p, c)| (p, int(c as i128))).collect()
    }
}

impl fmt::Display for LogCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .map(|(p, c)| format!("{} log {p}", rational_string(c)))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Integers serialize as JSON numbers, other rationals as `"n/d"` strings.
pub(crate) fn rational_json(c: &Rational) -> serde_json::Value {
    if c.is_integer() {
        serde_json::Value::from(c.to_integer() as i64)
    } else {
        serde_json::Value::from(rational_string(c))
    }
}

impl Serialize for LogCombo {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (p, c) in &self.0 {
            map.serialize_entry(&p.to_string(), &rational_json(c))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LogCombo {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = BTreeMap::<String, serde_json::Value>::deserialize(deserializer)?;
        let mut out = LogCombo::new();
        for (k, v) in raw {
            let p: u64 = k.parse().map_err(D::Error::custom)?;
            let c = match &v {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(|n| int(n as i128))
                    .ok_or_else(|| D::Error::custom("non-integral number"))?,
                serde_json::Value::String(s) => {
                    parse_rational(s).ok_or_else(|| D::Error::custom("bad rational"))?
                }
                _ => return Err(D::Error::custom("exponent must be a number or string")),
            };
            out.add_term(p, c);
        }
        Ok(out)
    }
}

//! Exact rationals and the logarithmic heights of rational vectors.
//!
//! Arbitrary-precision arithmetic is delegated to GMP through `rug`; a
//! `rug::Rational` is always stored in lowest terms with a positive
//! denominator, which is exactly the canonical form required here.

use std::fmt;

pub use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Natural logarithm of `|x|` for an arbitrarily large integer, evaluated in
/// double precision. Returns `0.0` for zero.
pub fn ln_abs(x: &Integer) -> f64 {
    if *x == 0 {
        return 0.0;
    }
    let (mantissa, exp) = x.to_f64_exp();
    mantissa.abs().ln() + f64::from(exp) * std::f64::consts::LN_2
}

/// Parses a rational written as `a` or `a/b` in decimal.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse {
        pos: 0,
        msg: format!("invalid rational {s:?}"),
    };
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = Integer::from_str_radix(num.trim_start_matches('+'), 10).map_err(|_| bad())?;
    let den = Integer::from_str_radix(den, 10).map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    Ok(Rational::from((num, den)))
}

/// A finite vector of rationals, viewed as a point of projective or affine
/// space for the purpose of measuring heights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalVector {
    entries: Vec<Rational>,
}

impl RationalVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RationalVector { entries }
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        RationalVector::new(entries.iter().map(|&e| Rational::from(e)).collect())
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| *e == 0)
    }

    /// The coprime integer vector proportional to `self`, with its first
    /// nonzero entry positive. `None` for the zero vector.
    pub fn canonical_integers(&self) -> Option<Vec<Integer>> {
        canonical_integers(&self.entries)
    }

    /// Bit length of the largest entry of the canonical integer
    /// representative, i.e. `floor(log2(max)) + 1`.
    pub fn projective_height_bits(&self) -> Result<u32> {
        let rep = self.canonical_integers().ok_or(Error::ZeroVector)?;
        Ok(rep.iter().map(|x| x.significant_bits()).max().unwrap_or(0))
    }

    /// `log max |x_i|` over the canonical coprime integer representative.
    pub fn projective_height(&self) -> Result<f64> {
        let rep = self.canonical_integers().ok_or(Error::ZeroVector)?;
        Ok(max_ln(&rep))
    }

    /// Projective height of the vector `(1, v)`.
    pub fn affine_height(&self) -> f64 {
        let mut augmented = Vec::with_capacity(self.entries.len() + 1);
        augmented.push(Rational::from(1));
        augmented.extend(self.entries.iter().cloned());
        let rep = canonical_integers(&augmented).expect("augmented vector is nonzero");
        max_ln(&rep)
    }

    pub fn affine_height_bits(&self) -> u32 {
        let mut augmented = Vec::with_capacity(self.entries.len() + 1);
        augmented.push(Rational::from(1));
        augmented.extend(self.entries.iter().cloned());
        let rep = canonical_integers(&augmented).expect("augmented vector is nonzero");
        rep.iter().map(|x| x.significant_bits()).max().unwrap_or(0)
    }
}

impl From<Vec<Rational>> for RationalVector {
    fn from(entries: Vec<Rational>) -> Self {
        RationalVector::new(entries)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

fn max_ln(rep: &[Integer]) -> f64 {
    rep.iter()
        .max_by(|a, b| a.cmp_abs(b))
        .map(ln_abs)
        .unwrap_or(0.0)
}

/// Clears denominators by their lcm, removes the gcd of the numerators, and
/// makes the first nonzero entry positive.
pub fn canonical_integers(entries: &[Rational]) -> Option<Vec<Integer>> {
    let first = entries.iter().position(|e| *e != 0)?;
    let mut lcm = Integer::from(1);
    for e in entries {
        if *e.denom() != 1 {
            lcm.lcm_mut(e.denom());
        }
    }
    let mut out: Vec<Integer> = entries
        .iter()
        .map(|e| e.numer() * Integer::from(&lcm / e.denom()))
        .collect();
    let mut g = Integer::new();
    for x in &out {
        g.gcd_mut(x);
        if g == 1 {
            break;
        }
    }
    if out[first] < 0 {
        g = -g;
    }
    if g != 1 {
        for x in &mut out {
            x.div_exact_mut(&g);
        }
    }
    Some(out)
}

/// Serde adapter writing a rational as its decimal string `a/b`.
pub mod rational_string {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for an optional rational as a decimal string or `null`.
pub mod option_rational_string {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&q.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Serde adapter for vectors of rationals as decimal strings.
pub mod rational_strings {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|q| q.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

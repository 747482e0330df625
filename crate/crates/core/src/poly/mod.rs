//! Dense univariate polynomials in `t` over the rationals.

mod mul;
mod squarefree;
mod text;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use rug::ops::NegAssign;
use rug::Assign;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numbers::{canonical_integers, Integer, Rational, RationalVector};

pub use mul::{mul_integer_polys, KARATSUBA_THRESHOLD};
pub use squarefree::{squarefree_decomposition, yun, Dims, SquarefreeDecomposition};

/// A polynomial stored as its coefficient list in ascending powers of `t`.
///
/// The last stored coefficient is never zero; the zero polynomial has no
/// coefficients and degree `None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::from(1))
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Poly::monomial(Rational::from(1), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        if c == 0 {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::new(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// Builds a polynomial from ascending coefficients, trimming zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn from_integers(coeffs: &[Integer]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|c| Rational::from(c.clone())).collect())
    }

    /// `t - root`.
    pub fn linear_root(root: &Rational) -> Self {
        Poly::from_coeffs(vec![Rational::from(-root), Rational::from(1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `t^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, k: usize) -> Option<&Rational> {
        self.coeffs.get(k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`, for arithmetic on
    /// degrees where the sentinel never matters.
    pub fn degree_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn lead_ref(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if *c == 0 {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|x| Rational::from(x * c)).collect(),
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::new(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn monic(&self) -> Poly {
        match self.lead_ref() {
            None => Poly::zero(),
            Some(l) if *l == 1 => self.clone(),
            Some(l) => {
                let inv = Rational::from(l.recip_ref());
                self.scale(&inv)
            }
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Rational::from(c * Integer::from(k)))
                .collect(),
        )
    }

    /// Exact Horner evaluation.
    pub fn evaluate(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// `f(t + h)`, by Horner's rule in the shifted variable.
    pub fn translate(&self, h: &Rational) -> Poly {
        let step = Poly::from_coeffs(vec![h.clone(), Rational::from(1)]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * &step;
            acc += &Poly::constant(c.clone());
        }
        acc
    }

    pub fn square(&self) -> Poly {
        self * self
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        for _ in 0..e {
            result = &result * self;
        }
        result
    }

    /// Quotient and remainder of Euclidean division.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let da = match self.degree() {
            Some(da) if da >= db => da,
            _ => return Ok((Poly::zero(), self.clone())),
        };
        let inv_lead = Rational::from(divisor.coeffs[db].recip_ref());
        let divisor_is_monic = divisor.coeffs[db] == 1;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Rational::new(); da - db + 1];
        let mut tmp = Rational::new();
        for k in (0..=da - db).rev() {
            let top = std::mem::take(&mut rem[k + db]);
            if top == 0 {
                continue;
            }
            let c = if divisor_is_monic {
                top
            } else {
                Rational::from(&top * &inv_lead)
            };
            for (i, b) in divisor.coeffs[..db].iter().enumerate() {
                if *b != 0 {
                    tmp.assign(&c * b);
                    rem[k + i] -= &tmp;
                }
            }
            quo[k] = c;
        }
        rem.truncate(db);
        Ok((Poly::from_coeffs(quo), Poly::from_coeffs(rem)))
    }

    pub fn quo(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divrem(divisor)?.0)
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Division that must leave no remainder. `None` when the remainder is
    /// nonzero.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Option<Poly>> {
        let (q, r) = self.divrem(divisor)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn divides(&self, other: &Poly) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let r = a.rem(&b)?.monic();
            a = b;
            b = r;
        }
        Ok(a)
    }

    /// Monic least common multiple; zero if either input is zero.
    pub fn lcm(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero());
        }
        let g = self.gcd(other)?;
        let prod = (self * other).monic();
        prod.quo(&g)
    }

    /// Multiplicity of `root` as a zero, together with the cofactor.
    /// The zero polynomial has no finite multiplicity and returns `None`.
    pub fn root_multiplicity(&self, root: &Rational) -> Option<(usize, Poly)> {
        if self.is_zero() {
            return None;
        }
        let mut m = 0;
        let mut current = self.clone();
        loop {
            let (q, r) = current.synthetic_division(root);
            if r != 0 {
                return Some((m, current));
            }
            current = q;
            m += 1;
        }
    }

    /// Divides by `t - root`, returning the quotient and the remainder
    /// (which equals the value at `root`).
    pub fn synthetic_division(&self, root: &Rational) -> (Poly, Rational) {
        let Some(deg) = self.degree() else {
            return (Poly::zero(), Rational::new());
        };
        let mut quo = vec![Rational::new(); deg];
        let mut acc = Rational::new();
        for k in (0..=deg).rev() {
            acc *= root;
            acc += &self.coeffs[k];
            if k > 0 {
                quo[k - 1] = acc.clone();
            }
        }
        (Poly::from_coeffs(quo), acc)
    }

    /// Coefficient vector as a [`RationalVector`].
    pub fn coefficient_vector(&self) -> RationalVector {
        RationalVector::new(self.coeffs.clone())
    }

    /// Writes `self = content * primitive` with `primitive` an integer
    /// polynomial whose coefficients are coprime and whose leading
    /// coefficient is positive.
    pub fn primitive_part(&self) -> (Rational, Vec<Integer>) {
        let Some(last) = self.coeffs.len().checked_sub(1) else {
            return (Rational::new(), Vec::new());
        };
        let mut rev: Vec<Rational> = self.coeffs.clone();
        rev.reverse();
        let mut prim = canonical_integers(&rev).expect("nonzero");
        prim.reverse();
        let content = Rational::from(&self.coeffs[last] / &prim[last]);
        (content, prim)
    }

    /// Common-denominator form: `self = numerators / denominator`.
    pub fn to_integer_form(&self) -> (Vec<Integer>, Integer) {
        let mut den = Integer::from(1);
        for c in &self.coeffs {
            if *c.denom() != 1 {
                den.lcm_mut(c.denom());
            }
        }
        let nums = self
            .coeffs
            .iter()
            .map(|c| {
                if *c.denom() == den {
                    c.numer().clone()
                } else {
                    c.numer() * Integer::from(&den / c.denom())
                }
            })
            .collect();
        (nums, den)
    }

    /// Inverse of [`Poly::to_integer_form`].
    pub fn from_integer_form(nums: Vec<Integer>, den: &Integer) -> Poly {
        Poly::from_coeffs(
            nums.into_iter()
                .map(|n| {
                    if *den == 1 {
                        Rational::from(n)
                    } else {
                        Rational::from((n, den.clone()))
                    }
                })
                .collect(),
        )
    }

    /// Decimal strings of the coefficients, ascending by power.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Poly> {
        let coeffs = items
            .iter()
            .map(|s| crate::numbers::parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(coeffs))
    }

    /// Parses the human text syntax, e.g. `t^4 + t^2 - 3/4*t + 1`.
    pub fn parse(input: &str) -> Result<Poly> {
        text::parse(input)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write(self, f)
    }
}

impl std::str::FromStr for Poly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Poly> {
        Poly::parse(s)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Poly, D::Error> {
        let items = Vec::<String>::deserialize(deserializer)?;
        Poly::from_strings(&items).map_err(serde::de::Error::custom)
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Poly {
        Poly::constant(c)
    }
}

fn add_coeffs(a: &[Rational], b: &[Rational], negate_b: bool) -> Poly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let c = match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) if negate_b => Rational::from(x - y),
            (Some(x), Some(y)) => Rational::from(x + y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) if negate_b => Rational::from(-y),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        };
        out.push(c);
    }
    Poly::from_coeffs(out)
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        add_coeffs(&self.coeffs, &rhs.coeffs, false)
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        add_coeffs(&self.coeffs, &rhs.coeffs, true)
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        mul::mul(self, rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in &mut self.coeffs {
            c.neg_assign();
        }
        self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Rational::new());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        while self.coeffs.last().is_some_and(|c| *c == 0) {
            self.coeffs.pop();
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Rational::new());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        while self.coeffs.last().is_some_and(|c| *c == 0) {
            self.coeffs.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn translate_matches_evaluation() {
        let f = p("t^4 - 3t^2 + 1/2 t - 7");
        let g = f.translate(&q(3, 2));
        assert_eq!(g.translate(&q(-3, 2)), f);
        for x in [q(0, 1), q(1, 3), q(-5, 2)] {
            assert_eq!(g.evaluate(&x), f.evaluate(&(x.clone() + q(3, 2))));
        }
    }

    #[test]
    fn divrem_examples() {
        let (quo, rem) = p("2t^2 + 1").divrem(&p("t - 1/4")).unwrap();
        assert_eq!(quo, p("2t + 1/2"));
        assert_eq!(rem, Poly::constant(q(9, 8)));

        let (quo, rem) = p("t^3").divrem(&p("t^3")).unwrap();
        assert_eq!(quo, Poly::one());
        assert!(rem.is_zero());

        let (quo, rem) = Poly::one().divrem(&Poly::t()).unwrap();
        assert!(quo.is_zero());
        assert_eq!(rem, Poly::one());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(Poly::one().divrem(&Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p("t^2 - 1").gcd(&p("t - 1")).unwrap(), p("t - 1"));
        let f = p("t^3 + t + 1");
        assert_eq!(f.gcd(&f.derivative()).unwrap(), Poly::one());
        assert_eq!(p("3t^2 + 6").gcd(&Poly::zero()).unwrap(), p("t^2 + 2"));
        assert_eq!(Poly::zero().gcd(&Poly::zero()), Err(Error::GcdOfZeros));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(p("t^2 + 1").evaluate(&q(0, 1)), 1);
        assert_eq!(p("4t^2 + 1").evaluate(&q(0, 1)), 1);
        assert_eq!(p("2t").evaluate(&q(0, 1)), 0);
        assert_eq!(p("t^4 + t^2 + t").evaluate(&q(1, 1)), 3);
    }

    #[test]
    fn degree_sentinel() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::from_ints(&[0, 0, 0]).degree(), None);
        let f = p("t^2 + 1");
        assert_eq!((&f * &Poly::zero()).degree(), None);
        assert_eq!((&f * &f).degree(), Some(4));
    }

    #[test]
    fn root_multiplicity_counts_repeated_factors() {
        let f = p("t^3 - t^2");
        assert_eq!(f.root_multiplicity(&q(0, 1)).unwrap().0, 2);
        assert_eq!(f.root_multiplicity(&q(1, 1)).unwrap().0, 1);
        assert_eq!(f.root_multiplicity(&q(2, 1)).unwrap().0, 0);
        assert!(Poly::zero().root_multiplicity(&q(0, 1)).is_none());
    }

    #[test]
    fn primitive_part_normalises_sign() {
        let (c, prim) = p("-1/2t^2 + 1/3").primitive_part();
        assert_eq!(prim, vec![Integer::from(-2), Integer::from(0), Integer::from(3)]);
        assert_eq!(c, q(-1, 6));
    }

    #[test]
    fn json_round_trip() {
        let f = p("t^8 - t^7 - 3/4*t^6 + 1");
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"["1","0","0","0","0","0","-3/4","-1","1"]"#);
        let g: Poly = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((-20i64..20, 1i64..6), 0..8)
            .prop_map(|v| Poly::from_coeffs(v.into_iter().map(|(n, d)| q(n, d)).collect()))
    }

    fn arb_long_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((-1000i64..1000, 1i64..9), 30..80)
            .prop_map(|v| Poly::from_coeffs(v.into_iter().map(|(n, d)| q(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a - &b) + &b, a);
        }

        #[test]
        fn divrem_round_trip(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let (quo, rem) = a.divrem(&b).unwrap();
            prop_assert_eq!(&(&quo * &b) + &rem, a);
            prop_assert!(rem.degree_i64() < b.degree_i64());
        }

        #[test]
        fn gcd_times_lcm(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let g = a.gcd(&b).unwrap();
            let l = a.lcm(&b).unwrap();
            prop_assert!(g.divides(&a).unwrap() && g.divides(&b).unwrap());
            prop_assert_eq!(&g * &l, (&a * &b).monic());
        }

        #[test]
        fn karatsuba_matches_schoolbook(a in arb_long_poly(), b in arb_long_poly()) {
            prop_assert_eq!(&a * &b, mul::mul_schoolbook_rational(&a, &b));
        }

        #[test]
        fn text_round_trip(a in arb_poly()) {
            prop_assert_eq!(Poly::parse(&a.to_string()).unwrap(), a);
        }
    }
}

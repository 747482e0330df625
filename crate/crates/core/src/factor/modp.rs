//! Polynomials over the prime field `F_p` and their Cantor–Zassenhaus
//! factorization.
//!
//! Coefficients are `u64` residues in ascending order with no trailing
//! zeros; `p < 2^32` keeps every product inside a `u64`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;

pub type FpPoly = Vec<u64>;

/// Arithmetic in `F_p[t]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

fn trim(mut v: FpPoly) -> FpPoly {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn deg(v: &[u64]) -> usize {
    v.len().saturating_sub(1)
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 32 {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn mulc(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow_scalar(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mulc(r, a);
            }
            a = self.mulc(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow_scalar(a, self.p - 2)
    }

    pub fn reduce_integer(&self, x: &Integer) -> u64 {
        let r = Integer::from(x.mod_u(self.p as u32));
        r.to_u64().expect("residue fits")
    }

    /// Image of a rational polynomial; fails when `p` divides a denominator
    /// or the leading coefficient.
    pub fn reduce(&self, f: &Poly) -> Result<FpPoly> {
        let mut out = Vec::with_capacity(f.coeffs().len());
        for c in f.coeffs() {
            let den = self.reduce_integer(c.denom());
            if den == 0 {
                return Err(Error::ChooseAnotherPrime(self.p));
            }
            out.push(self.mulc(self.reduce_integer(c.numer()), self.inv(den)));
        }
        if out.last() == Some(&0) {
            return Err(Error::ChooseAnotherPrime(self.p));
        }
        Ok(out)
    }

    pub fn reduce_integers(&self, f: &[Integer]) -> FpPoly {
        trim(f.iter().map(|c| self.reduce_integer(c)).collect())
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> FpPoly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> FpPoly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| (a.get(i).copied().unwrap_or(0) + self.p - b.get(i).copied().unwrap_or(0)) % self.p)
                .collect(),
        )
    }

    pub fn scale(&self, a: &[u64], c: u64) -> FpPoly {
        trim(a.iter().map(|&x| self.mulc(x, c)).collect())
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> FpPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        trim(out)
    }

    pub fn divrem(&self, a: &[u64], b: &[u64]) -> (FpPoly, FpPoly) {
        assert!(!b.is_empty(), "division by zero in F_p[t]");
        let mut r = a.to_vec();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let inv_lead = self.inv(*b.last().unwrap());
        let mut q = vec![0u64; r.len() - b.len() + 1];
        for k in (0..q.len()).rev() {
            let c = self.mulc(r[k + b.len() - 1], inv_lead);
            q[k] = c;
            if c != 0 {
                for (j, &y) in b.iter().enumerate() {
                    r[k + j] = (r[k + j] + self.p - self.mulc(c, y)) % self.p;
                }
            }
        }
        r.truncate(b.len() - 1);
        (trim(q), trim(r))
    }

    pub fn rem(&self, a: &[u64], b: &[u64]) -> FpPoly {
        self.divrem(a, b).1
    }

    pub fn monic(&self, a: &[u64]) -> FpPoly {
        match a.last() {
            None => Vec::new(),
            Some(&l) => self.scale(a, self.inv(l)),
        }
    }

    pub fn gcd(&self, a: &[u64], b: &[u64]) -> FpPoly {
        let (mut x, mut y) = (a.to_vec(), b.to_vec());
        while !y.is_empty() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// `(g, s, t)` with `s a + t b = g = gcd(a, b)` monic.
    pub fn ext_gcd(&self, a: &[u64], b: &[u64]) -> (FpPoly, FpPoly, FpPoly) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            let t = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let l = self.inv(*r0.last().expect("not both zero"));
        (self.scale(&r0, l), self.scale(&s0, l), self.scale(&t0, l))
    }

    pub fn derivative(&self, a: &[u64]) -> FpPoly {
        trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| self.mulc(c, i as u64 % self.p))
                .collect(),
        )
    }

    /// `base^e mod m`.
    pub fn pow_mod(&self, base: &[u64], e: &Integer, m: &[u64]) -> FpPoly {
        let mut result = vec![1u64];
        let base = self.rem(base, m);
        for i in (0..e.significant_bits()).rev() {
            result = self.rem(&self.mul(&result, &result), m);
            if e.get_bit(i) {
                result = self.rem(&self.mul(&result, &base), m);
            }
        }
        self.rem(&result, m)
    }

    /// Squarefree factorization of a monic polynomial.
    fn squarefree(&self, f: &[u64]) -> Vec<(FpPoly, usize)> {
        let mut out = Vec::new();
        if deg(f) == 0 {
            return out;
        }
        let df = self.derivative(f);
        if df.is_empty() {
            for (g, m) in self.squarefree(&self.pth_root(f)) {
                out.push((g, m * self.p as usize));
            }
            return out;
        }
        let mut c = self.gcd(f, &df);
        let mut w = self.divrem(f, &c).0;
        let mut i = 1;
        while w.len() > 1 {
            let y = self.gcd(&w, &c);
            let fac = self.divrem(&w, &y).0;
            if fac.len() > 1 {
                out.push((fac, i));
            }
            w = y;
            c = self.divrem(&c, &w).0;
            i += 1;
        }
        if c.len() > 1 {
            for (g, m) in self.squarefree(&self.pth_root(&c)) {
                out.push((g, m * self.p as usize));
            }
        }
        out
    }

    fn pth_root(&self, f: &[u64]) -> FpPoly {
        f.iter().step_by(self.p as usize).copied().collect()
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    fn distinct_degree(&self, f: &[u64]) -> Vec<(FpPoly, usize)> {
        let mut out = Vec::new();
        let mut rest = f.to_vec();
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let p = Integer::from(self.p);
        let mut i = 1;
        while deg(&rest) >= 2 * i {
            h = self.pow_mod(&h, &p, &rest);
            let g = self.gcd(&rest, &self.sub(&h, &x));
            if g.len() > 1 {
                rest = self.divrem(&rest, &g).0;
                h = self.rem(&h, &rest);
                out.push((g, i));
            }
            i += 1;
        }
        if rest.len() > 1 {
            let d = deg(&rest);
            out.push((rest, d));
        }
        out
    }

    /// Splits a product of distinct monic irreducibles of degree `d`.
    fn equal_degree(&self, f: &[u64], d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
        let n = deg(f);
        if n == d {
            out.push(f.to_vec());
            return;
        }
        let exp = (Integer::from(self.p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: FpPoly = trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = if self.p == 2 {
                let mut acc = a.clone();
                let mut term = a.clone();
                for _ in 1..d {
                    term = self.rem(&self.mul(&term, &term), f);
                    acc = self.add(&acc, &term);
                }
                acc
            } else {
                self.sub(&self.pow_mod(&a, &exp, f), &[1])
            };
            let g = self.gcd(f, &b);
            if g.len() > 1 && g.len() < f.len() {
                let h = self.divrem(f, &g).0;
                self.equal_degree(&g, d, rng, out);
                self.equal_degree(&h, d, rng, out);
                return;
            }
        }
    }

    /// Monic irreducible factors with multiplicities, sorted.
    pub fn factor_monic(&self, f: &[u64], seed: u64) -> Vec<(FpPoly, usize)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ self.p);
        let mut out = Vec::new();
        for (sq, m) in self.squarefree(f) {
            for (g, d) in self.distinct_degree(&sq) {
                let mut parts = Vec::new();
                self.equal_degree(&g, d, &mut rng, &mut parts);
                out.extend(parts.into_iter().map(|q| (q, m)));
            }
        }
        out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.iter().rev().cmp(b.0.iter().rev())));
        out
    }
}

/// Factorization of a polynomial over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModPFactorization {
    pub p: u64,
    pub unit: u64,
    /// Monic irreducible factors (ascending residues) with multiplicities.
    pub factors: Vec<(FpPoly, usize)>,
}

impl ModPFactorization {
    /// Degrees of the irreducible factors, repeated by multiplicity.
    pub fn degree_pattern(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(f, m)| std::iter::repeat_n(deg(f), *m))
            .collect();
        v.sort_unstable();
        v
    }
}

/// Seed used for the random splitting step unless a caller picks another.
pub const DEFAULT_SEED: u64 = 0x5eed_cf01;

/// Factors the reduction of `f` modulo the prime `p`.
pub fn factor_mod_p(f: &Poly, p: u64) -> Result<ModPFactorization> {
    factor_mod_p_seeded(f, p, DEFAULT_SEED)
}

pub fn factor_mod_p_seeded(f: &Poly, p: u64, seed: u64) -> Result<ModPFactorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = PrimeField::new(p)?;
    let fp = field.reduce(f)?;
    let unit = *fp.last().unwrap();
    let factors = field.factor_monic(&field.monic(&fp), seed);
    Ok(ModPFactorization { p, unit, factors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn examples() {
        let f = factor_mod_p(&p("t^2 + 1"), 5).unwrap();
        assert_eq!(f.factors, vec![(vec![2, 1], 1), (vec![3, 1], 1)]);
        let f = factor_mod_p(&p("t^2 + 1"), 3).unwrap();
        assert_eq!(f.factors, vec![(vec![1, 0, 1], 1)]);
        for q in [2, 7, 101] {
            assert_eq!(factor_mod_p(&p("t"), q).unwrap().factors, vec![(vec![0, 1], 1)]);
        }
    }

    #[test]
    fn errors() {
        assert_eq!(factor_mod_p(&p("5t^2 + 1"), 5), Err(Error::ChooseAnotherPrime(5)));
        assert_eq!(factor_mod_p(&p("t^2 + 1"), 9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn repeated_and_inseparable_factors() {
        // (t + 1)^3 (t^2 + 1) over F_3 involves a p-th power.
        let f = &p("t + 1").pow(3) * &p("t^2 + 1");
        let r = factor_mod_p(&f, 3).unwrap();
        assert_eq!(r.factors, vec![(vec![1, 1], 3), (vec![1, 0, 1], 1)]);
        let r = factor_mod_p(&p("t^4 + t^2 + 1"), 2).unwrap();
        assert_eq!(r.factors, vec![(vec![1, 1, 1], 2)]);
    }

    #[test]
    fn product_reconstructs() {
        let field = PrimeField::new(103).unwrap();
        for s in ["t^8 - t^7 + 3t^5 - 2t + 9", "t^12 + 1", "t^6 + t + 1", "t^9 - t"] {
            let f = p(s);
            let r = factor_mod_p(&f, 103).unwrap();
            let mut acc = vec![r.unit];
            for (g, m) in &r.factors {
                for _ in 0..*m {
                    acc = field.mul(&acc, g);
                }
            }
            assert_eq!(acc, field.reduce(&f).unwrap(), "{s}");
            for (g, _) in &r.factors {
                let single = factor_mod_p(&Poly::from_ints(&g.iter().map(|&c| c as i64).collect::<Vec<_>>()), 103).unwrap();
                assert_eq!(single.factors.len(), 1);
            }
        }
    }
}

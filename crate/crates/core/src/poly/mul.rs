use rug::{Assign, Integer};

use super::Poly;
use crate::numbers::Rational;

/// Operand length (in coefficients) at and above which integer
/// multiplication switches from schoolbook to Karatsuba.
pub const KARATSUBA_THRESHOLD: usize = 32;

/// Operands this short are multiplied directly; forming a common
/// denominator for the long one costs more than it saves.
const SHORT_OPERAND: usize = 3;

/// Product of two rational polynomials, computed on common-denominator
/// integer forms so that only one normalisation per output coefficient
/// is needed.
pub(super) fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    if a.coeffs.len() == 1 {
        return b.scale(&a.coeffs[0]);
    }
    if b.coeffs.len() == 1 {
        return a.scale(&b.coeffs[0]);
    }
    if a.coeffs.len().min(b.coeffs.len()) <= SHORT_OPERAND {
        return mul_schoolbook_rational(a, b);
    }
    let (an, ad) = a.to_integer_form();
    let (bn, bd) = b.to_integer_form();
    let prod = mul_integer_polys(&an, &bn);
    let den = ad * bd;
    Poly::from_integer_form(prod, &den)
}

/// Rational schoolbook product.
pub(crate) fn mul_schoolbook_rational(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![Rational::new(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] += Rational::from(x * y);
        }
    }
    Poly::from_coeffs(out)
}

/// Product of integer coefficient vectors (ascending powers).
pub fn mul_integer_polys(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Integer::new(); a.len() + b.len() - 1];
    mul_into(a, b, &mut out);
    out
}

/// Accumulates `a * b` into `out`, which must have length at least
/// `a.len() + b.len() - 1`.
fn mul_into(a: &[Integer], b: &[Integer], out: &mut [Integer]) {
    if a.len().min(b.len()) < KARATSUBA_THRESHOLD {
        schoolbook_into(a, b, out);
        return;
    }
    // Unbalanced operands: cut the longer one into chunks of the shorter length.
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if long.len() >= 2 * short.len() {
        for (k, chunk) in long.chunks(short.len()).enumerate() {
            mul_into(chunk, short, &mut out[k * short.len()..]);
        }
        return;
    }
    let half = long.len().div_ceil(2);
    let (a0, a1) = split(a, half);
    let (b0, b1) = split(b, half);

    let z0 = mul_integer_polys(a0, b0);
    let z2 = mul_integer_polys(a1, b1);
    let sa = add_vecs(a0, a1);
    let sb = add_vecs(b0, b1);
    let mut z1 = mul_integer_polys(&sa, &sb);
    for (i, x) in z0.iter().enumerate() {
        z1[i] -= x;
    }
    for (i, x) in z2.iter().enumerate() {
        z1[i] -= x;
    }
    for (i, x) in z0.into_iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in z1.into_iter().enumerate() {
        if x != 0 {
            out[i + half] += x;
        }
    }
    for (i, x) in z2.into_iter().enumerate() {
        out[i + 2 * half] += x;
    }
}

fn split(v: &[Integer], at: usize) -> (&[Integer], &[Integer]) {
    if v.len() <= at {
        (v, &[])
    } else {
        v.split_at(at)
    }
}

fn add_vecs(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => Integer::from(x + y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => Integer::new(),
        })
        .collect()
}

fn schoolbook_into(a: &[Integer], b: &[Integer], out: &mut [Integer]) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    let mut tmp = Integer::new();
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            tmp.assign(x * y);
            out[i + j] += &tmp;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn karatsuba_on_unbalanced_lengths() {
        for (la, lb) in [(40, 33), (100, 35), (33, 33), (64, 64), (31, 200)] {
            let a: Vec<i64> = (0..la).map(|i| (i * 7 % 13) as i64 - 6).collect();
            let b: Vec<i64> = (0..lb).map(|i| (i * 5 % 11) as i64 - 5).collect();
            let fast = mul_integer_polys(&ints(&a), &ints(&b));
            let mut slow = vec![Integer::new(); la + lb - 1];
            schoolbook_into(&ints(&a), &ints(&b), &mut slow);
            assert_eq!(fast, slow, "lengths {la} x {lb}");
        }
    }
}

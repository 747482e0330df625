//! Factorization of squarefree primitive integer polynomials: Hensel lifting
//! of a mod-`p` factorization followed by Zassenhaus subset recombination.

use rug::Integer;

use super::modp::{FpPoly, PrimeField, DEFAULT_SEED};
use crate::poly::Poly;

type ZPoly = Vec<Integer>;

fn trim(mut v: ZPoly) -> ZPoly {
    while v.last().is_some_and(|c| *c == 0) {
        v.pop();
    }
    v
}

fn zmul(a: &[Integer], b: &[Integer]) -> ZPoly {
    crate::poly::mul_integer_polys(a, b)
}

fn to_z(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| Integer::from(c)).collect()
}

/// Reduces into `[0, m)`.
fn zmod(a: &[Integer], m: &Integer) -> ZPoly {
    trim(
        a.iter()
            .map(|c| {
                let mut r = Integer::from(c % m);
                if r < 0 {
                    r += m;
                }
                r
            })
            .collect(),
    )
}

/// Reduces into the symmetric range `(-m/2, m/2]`.
fn zmod_sym(a: &[Integer], m: &Integer) -> ZPoly {
    let half = Integer::from(m >> 1);
    trim(
        zmod(a, m)
            .into_iter()
            .map(|c| if c > half { c - m } else { c })
            .collect(),
    )
}

/// Smallest prime `p >= 101` not dividing the leading coefficient and
/// keeping `f` squarefree modulo `p`.
pub fn choose_prime(f: &[Integer]) -> PrimeField {
    let mut p = 101u64;
    loop {
        if let Ok(field) = PrimeField::new(p) {
            let fp = field.reduce_integers(f);
            if fp.len() == f.len() {
                let g = field.gcd(&fp, &field.derivative(&fp));
                if g.len() == 1 {
                    return field;
                }
            }
        }
        p += 2;
    }
}

/// Landau–Mignotte style bound used for the lift precision.
///
/// Every integer factor `g` of `f` (degree `n`, max coefficient `A`, leading
/// coefficient `b`) satisfies `|g|_inf <= sqrt(n + 1) 2^n A`, so the scaled
/// candidate `b g / lead(g)` has coefficients at most
/// `B = sqrt(n + 1) 2^n A |b|`. Lifting to `p^k > 2B` makes the symmetric
/// residues of candidates exact.
pub fn coefficient_bound(f: &[Integer]) -> Integer {
    let n = f.len() - 1;
    let a = f.iter().map(|c| c.clone().abs()).max().expect("nonzero");
    let b = f.last().unwrap().clone().abs();
    let sqrt = Integer::from(n + 1).sqrt() + 1u32;
    sqrt * (Integer::from(1) << n as u32) * a * b
}

/// Lifts `f = lc * g * h (mod p)` with monic `g, h` to `mod p^k`.
fn lift_pair(field: &PrimeField, f_monic: &[Integer], g: &FpPoly, h: &FpPoly, k: u32) -> (ZPoly, ZPoly) {
    let p = Integer::from(field.p());
    let (one, s, t) = field.ext_gcd(g, h);
    debug_assert_eq!(one, vec![1]);
    let mut gz = to_z(g);
    let mut hz = to_z(h);
    let mut m = p.clone();
    for _ in 1..k {
        let diff: ZPoly = {
            let prod = zmul(&gz, &hz);
            let len = f_monic.len().max(prod.len());
            (0..len)
                .map(|i| {
                    let a = f_monic.get(i).cloned().unwrap_or_default();
                    let b = prod.get(i).cloned().unwrap_or_default();
                    a - b
                })
                .collect()
        };
        let e: ZPoly = diff.into_iter().map(|c| c.div_exact(&m)).collect();
        let ep = field.reduce_integers(&e);
        if !ep.is_empty() {
            let (q, r) = field.divrem(&field.mul(&t, &ep), g);
            let dh = field.add(&field.mul(&s, &ep), &field.mul(&q, h));
            for (i, c) in r.iter().enumerate() {
                gz[i] += Integer::from(&m * *c);
            }
            for (i, c) in dh.iter().enumerate() {
                hz[i] += Integer::from(&m * *c);
            }
        }
        m *= &p;
    }
    (gz, hz)
}

/// Lifts a complete list of monic factors of `f mod p` to `mod p^k`.
fn lift_all(field: &PrimeField, f_monic: &[Integer], factors: &[FpPoly], k: u32) -> Vec<ZPoly> {
    if factors.len() == 1 {
        return vec![f_monic.to_vec()];
    }
    let mid = factors.len() / 2;
    let prod = |fs: &[FpPoly]| fs.iter().fold(vec![1u64], |acc, g| field.mul(&acc, g));
    let g = prod(&factors[..mid]);
    let h = prod(&factors[mid..]);
    let (gz, hz) = lift_pair(field, f_monic, &g, &h, k);
    let mut out = lift_all(field, &gz, &factors[..mid], k);
    out.extend(lift_all(field, &hz, &factors[mid..], k));
    out
}

fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut idx: Vec<usize> = (0..k).collect();
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = idx.clone();
        let mut i = k;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(cur)
    })
}

fn primitive_positive(v: ZPoly) -> ZPoly {
    let mut g = Integer::new();
    for c in &v {
        g.gcd_mut(c);
    }
    if v.last().is_some_and(|c| *c < 0) {
        g = -g;
    }
    v.into_iter().map(|c| c.div_exact(&g)).collect()
}

/// Exact quotient of integer polynomials, if `b` divides `a` over `Z`.
fn zdiv_exact(a: &[Integer], b: &[Integer]) -> Option<ZPoly> {
    let pa = Poly::from_integers(a);
    let pb = Poly::from_integers(b);
    let (q, r) = pa.divrem(&pb).ok()?;
    if !r.is_zero() || q.coeffs().iter().any(|c| *c.denom() != 1) {
        return None;
    }
    Some(q.coeffs().iter().map(|c| c.numer().clone()).collect())
}

/// Irreducible factors of a squarefree primitive integer polynomial with
/// positive leading coefficient and positive degree.
pub fn factor_squarefree(f: &[Integer]) -> Vec<ZPoly> {
    if f.len() <= 2 {
        return vec![f.to_vec()];
    }
    let field = choose_prime(f);
    let fp = field.reduce_integers(f);
    let modular: Vec<FpPoly> = field
        .factor_monic(&field.monic(&fp), DEFAULT_SEED)
        .into_iter()
        .map(|(g, m)| {
            debug_assert_eq!(m, 1);
            g
        })
        .collect();
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }

    let bound = coefficient_bound(f);
    let p = Integer::from(field.p());
    let mut k = 1u32;
    let mut pk = p.clone();
    while pk <= Integer::from(&bound * 2u32) {
        pk *= &p;
        k += 1;
    }
    let lc = f.last().unwrap().clone();
    let lc_inv = lc.clone().invert(&pk).expect("p does not divide the leading coefficient");
    let f_monic = zmod(&f.iter().map(|c| Integer::from(c * &lc_inv)).collect::<Vec<_>>(), &pk);
    let mut lifted = lift_all(&field, &f_monic, &modular, k);

    let mut rest = f.to_vec();
    let mut out = Vec::new();
    let mut s = 1;
    'outer: while 2 * s <= lifted.len() {
        let b = rest.last().unwrap().clone();
        for subset in combinations(lifted.len(), s) {
            let mut cand = vec![b.clone()];
            for &i in &subset {
                cand = zmod(&zmul(&cand, &lifted[i]), &pk);
            }
            let cand = primitive_positive(zmod_sym(&cand, &pk));
            if let Some(q) = zdiv_exact(&rest, &cand) {
                out.push(cand);
                rest = q;
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
                continue 'outer;
            }
        }
        s += 1;
    }
    out.push(primitive_positive(rest));
    out
}

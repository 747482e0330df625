//! Lazy exact Laurent series in `1/t`, square roots of polynomials, Hankel
//! determinants and the linear-algebra Padé oracle.
//!
//! A [`TailSeries`] is `sum_{j >= -top} c_j t^(-j)`: `c_j` is the coefficient
//! of `t^(-j)`, so tail coefficients (strictly negative powers of `t`) are
//! the `c_j` with `j >= 1`. Coefficients are produced on demand and cached;
//! a series has a single writer.

use rug::{Assign, Integer, Rational};

use crate::error::{Error, Result};
use crate::poly::Poly;

#[derive(Clone, Debug)]
enum Generator {
    /// A polynomial: nothing beyond the stored coefficients.
    Finite,
    /// The square root of `radicand` with positive leading coefficient.
    Sqrt { radicand: Poly, two_lead: Rational },
    /// `p - q * root`.
    Combination {
        p: Poly,
        q: Poly,
        root: Box<TailSeries>,
    },
}

/// A Laurent series in `1/t` with lazily generated, memoised coefficients.
#[derive(Clone, Debug)]
pub struct TailSeries {
    /// Largest exponent that may carry a nonzero coefficient.
    top: i64,
    /// `coeffs[k]` is the coefficient of `t^(top - k)`.
    coeffs: Vec<Rational>,
    generator: Generator,
}

impl TailSeries {
    /// Embeds a polynomial as a (terminating) series.
    pub fn from_poly(p: &Poly) -> TailSeries {
        let top = p.degree().unwrap_or(0) as i64;
        let mut coeffs: Vec<Rational> = p.coeffs().to_vec();
        coeffs.reverse();
        TailSeries {
            top,
            coeffs,
            generator: Generator::Finite,
        }
    }

    /// `p - q * root`, e.g. the approximation error `p - q sqrt(D)`.
    pub fn combination(p: &Poly, q: &Poly, root: &TailSeries) -> TailSeries {
        let top = if q.is_zero() {
            p.degree_i64().max(0)
        } else {
            p.degree_i64().max(q.degree_i64() + root.top)
        };
        TailSeries {
            top,
            coeffs: Vec::new(),
            generator: Generator::Combination {
                p: p.clone(),
                q: q.clone(),
                root: Box::new(root.clone()),
            },
        }
    }

    /// Largest exponent carrying a (possibly zero) stored coefficient; for
    /// `sqrt(D)` this is `deg D / 2`.
    pub fn lead_exponent(&self) -> i64 {
        self.top
    }

    /// Number of coefficients generated so far.
    pub fn computed(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `t^(-j)`.
    pub fn coeff(&mut self, j: i64) -> Rational {
        self.coeff_at_exponent(-j)
    }

    /// Coefficient of `t^e`.
    pub fn coeff_at_exponent(&mut self, e: i64) -> Rational {
        if e > self.top {
            return Rational::new();
        }
        let k = (self.top - e) as usize;
        self.ensure(k);
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Extends the cache so that coefficients down to `t^(-precision)` exist.
    pub fn extend_to(&mut self, precision: i64) {
        if precision + self.top >= 0 {
            self.ensure((precision + self.top) as usize);
        }
    }

    /// Coefficients `c_{-top}, ..., c_precision` in order of decreasing
    /// exponent.
    pub fn prefix(&mut self, precision: i64) -> Vec<Rational> {
        self.extend_to(precision);
        let n = (precision + self.top + 1).max(0) as usize;
        (0..n)
            .map(|k| self.coeffs.get(k).cloned().unwrap_or_default())
            .collect()
    }

    fn ensure(&mut self, k: usize) {
        while self.coeffs.len() <= k {
            let next = self.coeffs.len();
            let value = match &mut self.generator {
                Generator::Finite => return,
                Generator::Sqrt { radicand, two_lead } => {
                    sqrt_coefficient(&self.coeffs, radicand, two_lead, self.top, next)
                }
                Generator::Combination { p, q, root } => {
                    let e = self.top - next as i64;
                    let mut acc = if e >= 0 { p.coeff(e as usize) } else { Rational::new() };
                    let mut tmp = Rational::new();
                    for (i, qi) in q.coeffs().iter().enumerate() {
                        if *qi != 0 {
                            let r = root.coeff_at_exponent(e - i as i64);
                            if r != 0 {
                                tmp.assign(qi * &r);
                                acc -= &tmp;
                            }
                        }
                    }
                    acc
                }
            };
            self.coeffs.push(value);
        }
    }

    /// The unique polynomial `a` with `self - a` in `t^(-1) Q[[1/t]]`.
    pub fn polynomial_part(&mut self) -> Poly {
        if self.top < 0 {
            return Poly::zero();
        }
        let mut c = self.prefix(0);
        c.reverse();
        Poly::from_coeffs(c)
    }

    /// Polynomial part of `self / divisor`.
    ///
    /// Writing `self = a + e` with `a` the polynomial part and `e = O(1/t)`,
    /// `e / divisor` is `O(t^(-1 - deg divisor))`, so the polynomial part of
    /// the quotient is the Euclidean quotient of `a` by `divisor`.
    pub fn polynomial_part_of_quotient(&mut self, divisor: &Poly) -> Result<Poly> {
        self.polynomial_part().quo(divisor)
    }

    /// Exponent-and-coefficient of the highest nonzero term, scanning at most
    /// down to `t^(-max_precision)`.
    pub fn leading_term(&mut self, max_precision: i64) -> Option<(i64, Rational)> {
        let mut e = self.top;
        while e >= -max_precision {
            let c = self.coeff_at_exponent(e);
            if c != 0 {
                return Some((e, c));
            }
            e -= 1;
        }
        None
    }

    /// Hankel determinant `H_m = det [c_{i+j+1}]_{0 <= i, j < m}` of the tail
    /// coefficients; `H_0 = 1`.
    pub fn hankel_determinant(&mut self, m: usize) -> Rational {
        if m == 0 {
            return Rational::from(1);
        }
        self.extend_to(2 * m as i64 - 1);
        let tail: Vec<Rational> = (1..=2 * m as i64 - 1).map(|j| self.coeff(j)).collect();
        let rows: Vec<Vec<Rational>> = (0..m)
            .map(|i| (0..m).map(|j| tail[i + j].clone()).collect())
            .collect();
        let (int_rows, scale) = clear_denominators(&rows);
        let det = bareiss_determinant(int_rows);
        // det(L * M) = L^m det(M)
        let mut denom = Integer::from(1);
        for _ in 0..m {
            denom *= &scale;
        }
        Rational::from((det, denom))
    }
}

fn sqrt_coefficient(
    known: &[Rational],
    radicand: &Poly,
    two_lead: &Rational,
    top: i64,
    j: usize,
) -> Rational {
    if j == 0 {
        return Rational::from(two_lead / 2u32);
    }
    // Coefficient of t^(2 top - j) in s^2 equals that of the radicand.
    let e = 2 * top - j as i64;
    let mut acc = if e >= 0 {
        radicand.coeff(e as usize)
    } else {
        Rational::new()
    };
    let mut tmp = Rational::new();
    for i in 1..j {
        let (a, b) = (&known[i], &known[j - i]);
        if *a != 0 && *b != 0 {
            tmp.assign(a * b);
            acc -= &tmp;
        }
    }
    acc / two_lead
}

/// Square root of a rational, when it exists in the rationals.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if *x < 0 {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    if !n.is_perfect_square() || !d.is_perfect_square() {
        return None;
    }
    Some(Rational::from((n.clone().sqrt(), d.clone().sqrt())))
}

/// Lazy expansion of `sqrt(D)` in `Q((1/t))`, on the branch whose leading
/// coefficient is the positive square root of `lead(D)`.
pub fn sqrt_series(radicand: &Poly) -> Result<TailSeries> {
    let deg = radicand.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if deg % 2 == 1 {
        return Err(Error::OddDegree(deg));
    }
    let lead = radicand.lead();
    let root = rational_sqrt(&lead).ok_or_else(|| Error::NotASquareLead(lead.to_string()))?;
    let two_lead = Rational::from(&root * 2u32);
    Ok(TailSeries {
        top: (deg / 2) as i64,
        coeffs: vec![root],
        generator: Generator::Sqrt {
            radicand: radicand.clone(),
            two_lead,
        },
    })
}

/// [`sqrt_series`] with coefficients precomputed down to `t^(-precision)`.
pub fn sqrt_series_to(radicand: &Poly, precision: i64) -> Result<TailSeries> {
    let mut s = sqrt_series(radicand)?;
    s.extend_to(precision);
    Ok(s)
}

/// Multiplies every row by the lcm of all denominators.
fn clear_denominators(rows: &[Vec<Rational>]) -> (Vec<Vec<Integer>>, Integer) {
    let mut l = Integer::from(1);
    for row in rows {
        for x in row {
            if *x.denom() != 1 {
                l.lcm_mut(x.denom());
            }
        }
    }
    let out = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| x.numer() * Integer::from(&l / x.denom()))
                .collect()
        })
        .collect();
    (out, l)
}

/// Determinant of a square integer matrix by Bareiss fraction-free
/// elimination with row pivoting.
pub fn bareiss_determinant(mut m: Vec<Vec<Integer>>) -> Integer {
    let n = m.len();
    if n == 0 {
        return Integer::from(1);
    }
    let mut negate = false;
    let mut prev = Integer::from(1);
    let mut tmp = Integer::new();
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return Integer::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                // m[i][j] = (m[i][j] m[k][k] - m[i][k] m[k][j]) / prev
                let mut v = Integer::from(&m[i][j] * &m[k][k]);
                tmp.assign(&m[i][k] * &m[k][j]);
                v -= &tmp;
                v.div_exact_mut(&prev);
                m[i][j] = v;
            }
            m[i][k] = Integer::new();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// A canonical nonzero kernel vector of a rational matrix with more columns
/// than rank: rows are brought to echelon form fraction-free (each new row
/// divided by its content), the last non-pivot column is set to 1 and the
/// other free columns to 0, and the result is scaled to coprime integers
/// with the last nonzero entry positive.
pub fn canonical_kernel_vector(rows: &[Vec<Rational>], ncols: usize) -> Option<Vec<Integer>> {
    let (mut a, _) = clear_denominators(rows);
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        for i in r + 1..a.len() {
            if a[i][c] == 0 {
                continue;
            }
            let factor = a[i][c].clone();
            let piv = a[r][c].clone();
            let (top, bottom) = a.split_at_mut(i);
            let (pivot_row, row) = (&top[r], &mut bottom[0]);
            let mut content = Integer::new();
            for (x, y) in row[c..ncols].iter_mut().zip(&pivot_row[c..ncols]) {
                *x = Integer::from(&*x * &piv) - Integer::from(&factor * y);
                content.gcd_mut(x);
            }
            if content > 1 {
                for x in &mut row[c..ncols] {
                    x.div_exact_mut(&content);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free = (0..ncols).rev().find(|c| !pivots.contains(c))?;
    let mut x = vec![Rational::new(); ncols];
    x[free] = Rational::from(1);
    for (row, &pc) in pivots.iter().enumerate().rev() {
        let mut s = Rational::new();
        for j in pc + 1..ncols {
            if a[row][j] != 0 && x[j] != 0 {
                s += Rational::from(&x[j] * &a[row][j]);
            }
        }
        x[pc] = -s / &a[row][pc];
    }
    let (_, prim) = Poly::from_coeffs(x).primitive_part();
    let mut prim = prim;
    prim.resize(ncols, Integer::new());
    Some(prim)
}

/// Independent Padé oracle: a nonzero pair `(p, q)` with `deg q <= m` and
/// `p - q sqrt(D) = O(t^(-m-1))`, from the `m` linear conditions on the
/// coefficients of `q` that kill `t^(-1), ..., t^(-m)` in `q sqrt(D)`.
/// `q` has coprime integer coefficients and positive leading coefficient.
pub fn pade_convergent(radicand: &Poly, m: usize) -> Result<(Poly, Poly)> {
    let mut root = sqrt_series(radicand)?;
    root.extend_to(2 * m as i64);
    // Condition k (1 <= k <= m), unknown i (0 <= i <= m): coefficient of
    // t^(-k) in t^i sqrt(D) is c_{k+i}.
    let rows: Vec<Vec<Rational>> = (1..=m as i64)
        .map(|k| (0..=m as i64).map(|i| root.coeff(k + i)).collect())
        .collect();
    let kernel = canonical_kernel_vector(&rows, m + 1)
        .ok_or_else(|| Error::Invariant("Padé system has a trivial kernel".into()))?;
    let q = Poly::from_integers(&kernel);
    let p = polynomial_part_of_product(&q, &mut root);
    Ok((p, q))
}

/// Polynomial part of `q * s` for a polynomial `q` and series `s`.
pub fn polynomial_part_of_product(q: &Poly, s: &mut TailSeries) -> Poly {
    let Some(dq) = q.degree() else {
        return Poly::zero();
    };
    let top = dq as i64 + s.lead_exponent();
    if top < 0 {
        return Poly::zero();
    }
    let mut out = vec![Rational::new(); top as usize + 1];
    for (e, slot) in out.iter_mut().enumerate() {
        for (i, qi) in q.coeffs().iter().enumerate() {
            if *qi != 0 {
                let c = s.coeff_at_exponent(e as i64 - i as i64);
                if c != 0 {
                    *slot += Rational::from(qi * &c);
                }
            }
        }
    }
    Poly::from_coeffs(out)
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

    /// Binomial-series oracle: coefficients of (1 + x)^(1/2).
    fn binomial_half(k: usize) -> Rational {
        let mut c = Rational::from(1);
        for i in 0..k {
            c *= Rational::from(1) / 2 - Rational::from(i as i64);
            c /= Rational::from(i as i64 + 1);
        }
        c
    }

    #[test]
    fn sqrt_of_t4_t2_t_matches_binomial_expansion() {
        // sqrt(t^4 + t^2 + t) = t^2 (1 + u)^(1/2), u = t^-2 + t^-3.
        let mut s = sqrt_series(&p("t^4 + t^2 + t")).unwrap();
        let terms = 12i64;
        // Oracle: expand sum_k binom(1/2, k) (t^-2 + t^-3)^k up to t^-(terms+2).
        let mut oracle = vec![Rational::new(); (terms + 3) as usize];
        let mut power = vec![Rational::new(); (terms + 3) as usize];
        power[0] = Rational::from(1);
        for k in 0..=(terms as usize) {
            let b = binomial_half(k);
            for (e, c) in power.iter().enumerate() {
                oracle[e] += Rational::from(&b * c);
            }
            let mut next = vec![Rational::new(); power.len()];
            for (e, c) in power.iter().enumerate() {
                if e + 2 < next.len() {
                    next[e + 2] += c;
                }
                if e + 3 < next.len() {
                    next[e + 3] += c;
                }
            }
            power = next;
        }
        for e in 0..(terms + 3) {
            // t^2 * t^-e
            assert_eq!(s.coeff_at_exponent(2 - e), oracle[e as usize], "t^{}", 2 - e);
        }
        assert_eq!(s.coeff(-2), 1);
        assert_eq!(s.coeff(0), q(1, 2));
        assert_eq!(s.coeff(1), q(1, 2));
        assert_eq!(s.coeff(2), q(-1, 8));
        assert_eq!(s.coeff(3), q(-1, 4));
    }

    #[test]
    fn sqrt_of_perfect_square_terminates() {
        let mut s = sqrt_series(&p("t^2")).unwrap();
        assert_eq!(s.polynomial_part(), p("t"));
        assert!((1..20).all(|j| s.coeff(j) == 0));
    }

    #[test]
    fn sqrt_errors() {
        assert_eq!(
            sqrt_series(&p("2t^2 + 1")).unwrap_err(),
            Error::NotASquareLead("2".into())
        );
        assert_eq!(sqrt_series(&p("t^3 + 1")).unwrap_err(), Error::OddDegree(3));
        assert_eq!(sqrt_series(&p("4")).unwrap_err(), Error::ConstantPolynomial);
        assert_eq!(sqrt_series(&Poly::zero()).unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn non_monic_square_lead() {
        let mut s = sqrt_series(&p("9/4*t^2 + 1")).unwrap();
        assert_eq!(s.polynomial_part(), p("3/2*t"));
    }

    #[test]
    fn polynomial_part_examples() {
        assert_eq!(sqrt_series(&p("t^4 + t^2 + t")).unwrap().polynomial_part(), p("t^2 + 1/2"));
        assert_eq!(sqrt_series(&p("t^2 + 1")).unwrap().polynomial_part(), p("t"));
        let f = p("3t^3 - t + 5");
        assert_eq!(TailSeries::from_poly(&f).polynomial_part(), f);
    }

    #[test]
    fn prefix_is_stable() {
        let mut s = sqrt_series(&p("t^6 + t + 1")).unwrap();
        let a = s.prefix(10);
        let b = s.prefix(25);
        assert_eq!(&b[..a.len()], &a[..]);
        let mut fresh = sqrt_series(&p("t^6 + t + 1")).unwrap();
        assert_eq!(fresh.prefix(25), b);
    }

    #[test]
    fn hankel_examples() {
        let mut s = sqrt_series(&p("t^4 + t^2 + t")).unwrap();
        assert_eq!(s.hankel_determinant(0), 1);
        assert_eq!(s.hankel_determinant(1), q(1, 2));
        assert_eq!(s.hankel_determinant(2), q(-9, 64));
    }

    /// Cofactor expansion over rationals, independent of Bareiss.
    fn det_by_cofactors(m: &[Vec<Rational>]) -> Rational {
        let n = m.len();
        if n == 0 {
            return Rational::from(1);
        }
        let mut total = Rational::new();
        for j in 0..n {
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let term = Rational::from(&m[0][j] * &det_by_cofactors(&minor));
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn hankel_agrees_with_cofactor_expansion() {
        let mut s = sqrt_series(&p("t^6 - 2t^3 + 3t + 1")).unwrap();
        for m in 0..6usize {
            let mat: Vec<Vec<Rational>> = (0..m)
                .map(|i| (0..m).map(|j| s.coeff((i + j + 1) as i64)).collect())
                .collect();
            assert_eq!(s.hankel_determinant(m), det_by_cofactors(&mat), "m = {m}");
        }
    }

    #[test]
    fn pade_examples() {
        let (pp, qq) = pade_convergent(&p("t^4 + t^2 + t"), 0).unwrap();
        assert_eq!((pp, qq), (p("t^2 + 1/2"), Poly::one()));

        let (pp, qq) = pade_convergent(&p("t^2 + 1"), 1).unwrap();
        // Proportional to (2t^2 + 1, 2t); the canonical q is primitive.
        assert_eq!((pp, qq), (p("t^2 + 1/2"), p("t")));

        // m = 1 for t^4 + t^2 + t: q = t - 1/4 up to scale (a_1 = 2t + 1/2).
        let (pp, qq) = pade_convergent(&p("t^4 + t^2 + t"), 1).unwrap();
        assert_eq!(qq, p("4t + 1"));
        let mut err = TailSeries::combination(&pp, &qq, &sqrt_series(&p("t^4 + t^2 + t")).unwrap());
        assert!(err.leading_term(40).unwrap().0 <= -2);
    }

    #[test]
    fn bareiss_handles_zero_pivots() {
        let m = vec![
            vec![Integer::from(0), Integer::from(1)],
            vec![Integer::from(1), Integer::from(0)],
        ];
        assert_eq!(bareiss_determinant(m), -1);
        let m = vec![
            vec![Integer::from(1), Integer::from(2)],
            vec![Integer::from(2), Integer::from(4)],
        ];
        assert_eq!(bareiss_determinant(m), 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn square_round_trip(
            mid in prop::collection::vec(-5i64..6, 2..8),
            lead_root in 1i64..4,
        ) {
            let mut c = mid.clone();
            let deg = if c.len() % 2 == 0 { c.len() } else { c.len() + 1 };
            c.resize(deg, 0);
            c.push(lead_root * lead_root);
            let d = Poly::from_ints(&c);
            let k = 15i64;
            let mut s = sqrt_series(&d).unwrap();
            let top = s.lead_exponent();
            let coeffs = s.prefix(k);
            // (sum_{e <= top} s_e t^e)^2 must match D on exponents >= -k.
            for e in (-k)..=(2 * top) {
                let mut acc = Rational::new();
                for (i, a) in coeffs.iter().enumerate() {
                    let ea = top - i as i64;
                    let eb = e - ea;
                    if eb > top || eb < top - (coeffs.len() as i64 - 1) {
                        continue;
                    }
                    acc += Rational::from(a * &coeffs[(top - eb) as usize]);
                }
                let expect = if e >= 0 { d.coeff(e as usize) } else { Rational::new() };
                // Only exponents whose full convolution lies inside the prefix are checked.
                if e >= -k + top {
                    prop_assert_eq!(acc, expect, "exponent {}", e);
                }
            }
        }
    }
}

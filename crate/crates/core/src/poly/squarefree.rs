use serde::Serialize;

use super::Poly;
use crate::numbers::Rational;

/// Degree bookkeeping attached to `D = unit * D1^2 * Dtilde`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dims {
    /// Half the degree of `D`.
    pub d: i64,
    pub d1: i64,
    /// Half the degree of the squarefree part.
    pub dtilde_half: i64,
    /// Genus of the smooth model of `u^2 = Dtilde(t)`.
    pub genus_tilde: i64,
    pub arithmetic_genus: i64,
}

/// `D = unit * D1^2 * Dtilde` with `D1` monic and `Dtilde` monic squarefree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquarefreeDecomposition {
    pub d1: Poly,
    pub dtilde: Poly,
    #[serde(with = "crate::numbers::rational_string")]
    pub unit: Rational,
    pub dims: Dims,
    /// Set when the squarefree part is constant.
    pub is_perfect_square: bool,
}

impl SquarefreeDecomposition {
    pub fn reconstruct(&self) -> Poly {
        (&self.d1.square() * &self.dtilde).scale(&self.unit)
    }
}

/// Yun's algorithm: returns monic squarefree, pairwise coprime `f_1, f_2, ...`
/// with `monic(f) = prod f_i^i`.
pub fn yun(f: &Poly) -> Vec<Poly> {
    let f = f.monic();
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let df = f.derivative();
    let a0 = f.gcd(&df).expect("f is nonzero");
    let mut b = f.quo(&a0).expect("nonzero");
    let mut c = df.quo(&a0).expect("nonzero");
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    loop {
        let a = b.gcd(&d).expect("b is nonzero");
        out.push(a.clone());
        b = b.quo(&a).expect("nonzero");
        if b.is_constant() {
            break;
        }
        c = d.quo(&a).expect("nonzero");
        d = &c - &b.derivative();
    }
    while out.last().is_some_and(|p| p.is_one()) {
        out.pop();
    }
    out
}

/// Splits `D` into its square part and squarefree part.
///
/// # Panics
/// If `d` is the zero polynomial.
pub fn squarefree_decomposition(d: &Poly) -> SquarefreeDecomposition {
    assert!(!d.is_zero(), "squarefree decomposition of zero");
    let unit = d.lead();
    let mut d1 = Poly::one();
    let mut dtilde = Poly::one();
    for (i, f) in yun(d).iter().enumerate() {
        let mult = i + 1;
        if mult % 2 == 1 {
            dtilde = &dtilde * f;
        }
        if mult >= 2 {
            d1 = &d1 * &f.pow((mult / 2) as u32);
        }
    }
    let deg = d.degree_i64();
    let dt = dtilde.degree_i64();
    let dims = Dims {
        d: deg / 2,
        d1: d1.degree_i64(),
        dtilde_half: dt / 2,
        genus_tilde: dt / 2 - 1,
        arithmetic_genus: deg / 2 - 1,
    };
    SquarefreeDecomposition {
        is_perfect_square: dtilde.is_constant(),
        d1,
        dtilde,
        unit,
        dims,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn non_squarefree_example() {
        let sf = squarefree_decomposition(&p("t^6 + t^4 + t^3"));
        assert_eq!(sf.d1, p("t"));
        assert_eq!(sf.dtilde, p("t^4 + t^2 + t"));
        assert_eq!(sf.unit, 1);
        assert_eq!(sf.dims.d, 3);
        assert_eq!(sf.dims.dtilde_half, 2);
        assert_eq!(sf.dims.genus_tilde, 1);
        assert!(!sf.is_perfect_square);
    }

    #[test]
    fn square_times_quadratic() {
        let d = &p("t - 1").square() * &p("t^2 + 1");
        let sf = squarefree_decomposition(&d);
        assert_eq!(sf.d1, p("t - 1"));
        assert_eq!(sf.dtilde, p("t^2 + 1"));
    }

    #[test]
    fn perfect_square_flag() {
        let sf = squarefree_decomposition(&p("t^2"));
        assert_eq!(sf.d1, p("t"));
        assert_eq!(sf.dtilde, Poly::one());
        assert!(sf.is_perfect_square);
        let sf = squarefree_decomposition(&p("4t^4 + 8t^2 + 4"));
        assert_eq!(sf.d1, p("t^2 + 1"));
        assert_eq!(sf.unit, 4);
        assert!(sf.is_perfect_square);
    }

    #[test]
    fn yun_multiplicities() {
        let f = &(&p("t").pow(3) * &p("t + 1").square()) * &p("t^2 + 2");
        let parts = yun(&f);
        assert_eq!(parts, vec![p("t^2 + 2"), p("t + 1"), p("t")]);
    }

    proptest! {
        #[test]
        fn reconstruction_is_exact(
            a in prop::collection::vec(-4i64..5, 1..4),
            b in prop::collection::vec(-4i64..5, 1..4),
            c in prop::collection::vec(-4i64..5, 1..3),
            unit in 1i64..5,
        ) {
            let f = Poly::from_ints(&a);
            let g = Poly::from_ints(&b);
            let h = Poly::from_ints(&c);
            prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
            let d = (&(&f * &g.square()) * &h.pow(3)).scale(&Rational::from(unit));
            let sf = squarefree_decomposition(&d);
            prop_assert_eq!(sf.reconstruct(), d);
            prop_assert!(sf.dtilde.gcd(&sf.dtilde.derivative()).unwrap().is_one());
            prop_assert!(sf.d1.lead() == 1 && sf.dtilde.lead() == 1);
        }
    }
}

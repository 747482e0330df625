use pellcf_core::analysis::{
    detect_degree_period, hankel_cross_check, mcmullen_experiment, pell_check, zero_occurrences, PellVerdict,
};
use pellcf_core::{
    expand, expand_with, pade_convergent, squarefree_decomposition, verify_identities, ExpandOptions, ExpansionTranscript,
    Poly, Rational,
};
use proptest::prelude::*;

/// Monic radicands of degree 2, 4 or 6 with small integer coefficients,
/// perfect squares excluded.
fn radicand() -> impl Strategy<Value = Poly> {
    (1usize..=3)
        .prop_flat_map(|d| prop::collection::vec(-4i64..=4, 2 * d))
        .prop_map(|mut c| {
            c.push(1);
            Poly::from_ints(&c)
        })
        .prop_filter("not a square", |d| !squarefree_decomposition(d).is_perfect_square)
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-3i64..=3, 1i64..=2).prop_map(|(a, b)| Rational::from((a, b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn structural_identities_hold(d in radicand()) {
        let tr = expand(&d, 12).unwrap();
        let rep = verify_identities(&tr);
        prop_assert!(rep.all_pass(), "{}: {:?}", d, rep.failures());
    }

    #[test]
    fn resume_equals_fresh(d in radicand(), n in 0usize..8, k in 1usize..8, thin in prop::option::of(1usize..4)) {
        let opts = ExpandOptions { thin_window: thin, ..Default::default() };
        let fresh = expand_with(&d, n + k, opts.clone()).unwrap().to_jsonl();
        let saved = expand_with(&d, n, opts).unwrap().to_jsonl();
        let mut resumed = ExpansionTranscript::from_jsonl(&saved).unwrap();
        resumed.extend_by(k).unwrap();
        prop_assert_eq!(fresh, resumed.to_jsonl());
    }

    #[test]
    fn pade_oracle_and_hankel_agree(d in radicand()) {
        let tr = expand(&d, 8).unwrap();
        for n in 1..=8 {
            let (p, q) = tr.convergent(n).unwrap();
            let (op, oq) = pade_convergent(&d, q.degree().unwrap()).unwrap();
            prop_assert_eq!(&op * &q, &p * &oq, "n = {}", n);
        }
        let max_m = tr.degrees()[1..].iter().sum::<usize>().min(10);
        let rep = hankel_cross_check(&tr, max_m).unwrap();
        prop_assert!(rep.agree);
    }

    #[test]
    fn shifted_squares_are_pellian(f in prop::collection::vec(-3i64..=3, 1..4)) {
        let mut c = f;
        c.push(1);
        let f = Poly::from_ints(&c);
        let d = &f.square() + &Poly::one();
        let rep = pell_check(&d, 10).unwrap();
        prop_assert_eq!(rep.verdict, PellVerdict::Pellian);
        let (x, y) = rep.solution.unwrap();
        prop_assert_eq!(&x.square() - &(&y.square() * &d), Poly::one());
    }

    #[test]
    fn zero_multiplicities_are_exact(d in radicand(), rho in small_rational()) {
        let tr = expand(&d, 10).unwrap();
        let z = zero_occurrences(&tr, std::slice::from_ref(&rho)).unwrap();
        let reported: Vec<(usize, usize)> = z.probes[0].occurrences.clone();
        for n in 1..=10 {
            let (_, q) = tr.convergent(n).unwrap();
            let m = q.root_multiplicity(&rho).map_or(0, |(m, _)| m);
            let listed = reported.iter().find(|(k, _)| *k == n).map_or(0, |(_, m)| *m);
            prop_assert_eq!(m, listed, "n = {}", n);
        }
    }

    #[test]
    fn period_reports_match_the_sequence(d in radicand()) {
        let tr = expand_with(&d, 30, ExpandOptions::thin(2)).unwrap();
        let rep = detect_degree_period(&tr, 2);
        if let (Some(s), Some(pi)) = (rep.preperiod, rep.period) {
            for n in s..rep.degrees.len() {
                prop_assert_eq!(rep.degrees[n], rep.pattern[(n - s) % pi]);
            }
        }
    }

    #[test]
    fn twisted_radicands_use_the_plain_engine(d in radicand(), rho in small_rational()) {
        prop_assume!(d.evaluate(&rho) != 0);
        let rep = mcmullen_experiment(&d, &rho, 8).unwrap();
        let direct = expand(&rep.twisted, 8).unwrap();
        prop_assert_eq!(rep.degrees, direct.degrees());
    }
}

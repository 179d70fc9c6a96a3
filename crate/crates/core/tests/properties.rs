use num_rational::BigRational;
use proptest::prelude::*;

use qcalc::ops::{q_derivative, scale_substitute};
use qcalc::qnum::{gauss_binomial, q_int, QBase};
use qcalc::qwave::{at_t_zero, dalembert_solve, wave_operator, GridRange, InitialData, Profile};
use qcalc::{CoefExpr, GaussianRational, LaurentPoly, MPoly, Speed};

fn gaussian(re: i64, im: i64) -> GaussianRational {
    GaussianRational::new(
        BigRational::from_integer(re.into()),
        BigRational::from_integer(im.into()),
    )
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i64..=3, -4i64..=4, -2i64..=2), 0..4).prop_map(|terms| {
        LaurentPoly::from_terms(terms.into_iter().map(|(e, re, im)| (e, gaussian(re, im))))
    })
}

fn nonzero_laurent() -> impl Strategy<Value = LaurentPoly> {
    laurent().prop_filter("nonzero", |p| !p.is_zero())
}

/// Denominators mixing cyclotomic-style factors and arbitrary ones.
fn denominator() -> impl Strategy<Value = LaurentPoly> {
    prop_oneof![
        (1u32..=6).prop_map(q_int),
        (1u32..=4, 1u32..=4).prop_map(|(a, b)| &q_int(a) * &q_int(b)),
        nonzero_laurent(),
        Just(LaurentPoly::one()),
    ]
}

fn coef() -> impl Strategy<Value = CoefExpr> {
    (laurent(), denominator()).prop_map(|(n, d)| CoefExpr::from_parts(n, &d).unwrap())
}

fn nonzero_coef() -> impl Strategy<Value = CoefExpr> {
    coef().prop_filter("nonzero", |c| !c.is_zero())
}

fn rational_value() -> impl Strategy<Value = CoefExpr> {
    (-9i64..=9, 1i64..=6).prop_map(|(p, q)| CoefExpr::from_ratio(p, q))
}

fn x_poly(max_deg: usize) -> impl Strategy<Value = Vec<CoefExpr>> {
    prop::collection::vec(rational_value(), 1..=max_deg + 1)
}

fn profile(coeffs: &[CoefExpr]) -> MPoly {
    Profile::from_coeffs(coeffs).poly().clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(a in coef(), b in coef(), c in coef()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &CoefExpr::one(), a.clone());
    }

    #[test]
    fn inverses(a in nonzero_coef()) {
        prop_assert!((&a * &a.inv().unwrap()).is_one());
        prop_assert_eq!(a.inv().unwrap().inv().unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in coef(), b in coef(), k in 2i64..=7) {
        let s = GaussianRational::from_ratio(k, 3);
        if let (Ok(x), Ok(y)) = (a.eval_s(&s), b.eval_s(&s)) {
            prop_assert_eq!((&a * &b).eval_s(&s).unwrap(), &x * &y);
            prop_assert_eq!((&a + &b).eval_s(&s).unwrap(), &x + &y);
        }
    }

    #[test]
    fn inverse_substitution_is_an_involutive_homomorphism(a in coef(), b in coef()) {
        prop_assert_eq!(a.substitute_inverse().substitute_inverse(), a.clone());
        prop_assert_eq!((&a * &b).substitute_inverse(), &a.substitute_inverse() * &b.substitute_inverse());
    }

    #[test]
    fn gauss_binomial_symmetry_and_pascal(n in 1u32..=14, k in 0u32..=14) {
        let k = k.min(n);
        prop_assert_eq!(gauss_binomial(n, k).unwrap(), gauss_binomial(n, n - k).unwrap());
        if (1..n).contains(&k) {
            // [n,k] = [n-1,k-1] + q^k [n-1,k]
            let rhs = &gauss_binomial(n - 1, k - 1).unwrap()
                + &(&LaurentPoly::q_pow(k as i64) * &gauss_binomial(n - 1, k).unwrap());
            prop_assert_eq!(gauss_binomial(n, k).unwrap(), rhs);
        }
        let mut classical = 1i64;
        for j in 0..k as i64 {
            classical = classical * (n as i64 - j) / (j + 1);
        }
        let at_one = CoefExpr::from(gauss_binomial(n, k).unwrap()).at_s_one().unwrap();
        prop_assert_eq!(at_one, GaussianRational::from_integer(classical));
    }

    #[test]
    fn q_derivative_matches_difference_quotient(coeffs in x_poly(8), inverse in any::<bool>()) {
        let p = profile(&coeffs);
        let (base, k) = if inverse { (QBase::INV_Q, -2) } else { (QBase::Q, 2) };
        // (f(q x) − f(x)) / ((q − 1) x)
        let diff = &scale_substitute(&p, "x", k) - &p;
        let q_minus_one = CoefExpr::from(&LaurentPoly::s_pow(k) - &LaurentPoly::one());
        let inv = q_minus_one.inv().unwrap();
        let expected = diff.map_terms(|e, c| {
            (e[0] > 0).then(|| (vec![e[0] - 1], c * &inv))
        });
        prop_assert_eq!(q_derivative(&p, "x", base), expected);
    }

    #[test]
    fn sampling_equality_agrees_with_cross_multiplication(a in coef(), d in nonzero_laurent(), b in coef()) {
        // an equal pair in a different representation, and an arbitrary pair
        let scaled = CoefExpr::from(d);
        let same = &(&a * &scaled) * &scaled.inv().unwrap();
        prop_assert!(a.eq_by_sampling(&same));
        prop_assert_eq!(a.eq_by_sampling(&b), a.cross_eq(&b));
        let near = &a + &CoefExpr::from_ratio(1, 1000);
        prop_assert!(!a.eq_by_sampling(&near));
    }

    #[test]
    fn grid_points_are_inclusive(start in -50i32..50, len in 0i32..40, step_hundredths in 1i32..50) {
        let step = step_hundredths as f64 / 100.0;
        let end = start as f64 + len as f64 * step;
        let g = GridRange::new(start as f64, end, step).unwrap();
        prop_assert_eq!(g.len(), len as usize + 1);
        prop_assert_eq!(g.points().len(), g.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sampling_equality_thousand_cases(a in coef(), b in coef()) {
        prop_assert_eq!(a.eq_by_sampling(&b), a.cross_eq(&b));
        let c = &(&a + &b) - &b;
        prop_assert!(a.eq_by_sampling(&c));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dalembert_symbolic_speed(f in x_poly(5), g in x_poly(5)) {
        let (f, g) = (profile(&f), profile(&g));
        let data = InitialData { f: Profile::Poly(f.clone()), g: Profile::Poly(g.clone()) };
        let u = dalembert_solve(&data, &Speed::Symbolic).unwrap();
        let vars = ["x", "c"];
        prop_assert_eq!(at_t_zero(&u.body), f.embed(&vars));
        prop_assert_eq!(at_t_zero(&q_derivative(&u.body, "t", QBase::INV_Q)), g.embed(&vars));
        prop_assert!(wave_operator(&u.body, &u.speed).is_zero());
    }
}

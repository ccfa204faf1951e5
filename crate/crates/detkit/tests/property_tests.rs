//! Randomized algebraic invariants for the scalar and polynomial layers.
//! These are the identities everything above relies on, so they get
//! hammered with generated inputs rather than hand-picked cases.

use detkit::exact::{
    binom_int, binom_int_ext, binomial, binomial_ext, gamma_ratio, pochhammer, rat,
    ratio, FactoredScalar,
};
use detkit::{MPoly, Poly, Rat};

use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| ratio(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    (prop_oneof![1i64..=60, -60i64..=-1], 1i64..=12).prop_map(|(n, d)| ratio(n, d))
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_rat(), 0..=5).prop_map(Poly::from_coeffs)
}

fn nonzero_poly() -> impl Strategy<Value = Poly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn mpoly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec(((0i32..=3, 0i32..=3, 0i32..=2), small_rat()), 0..=4).prop_map(
        |terms| {
            let mut acc = MPoly::zero();
            for ((a, b, c), coeff) in terms {
                acc = acc.add(&MPoly::monomial([a, b, c], coeff));
            }
            acc
        },
    )
}

proptest! {
    // Pascal rule, valid for every rational top and p >= 0 under the
    // plain convention (the p = 0 edge needs binomial(.., -1) = 0)
    #[test]
    fn pascal_rule(alpha in small_rat(), p in 0i64..=18) {
        let lhs = binomial(&alpha, p);
        let prev = &alpha - rat(1);
        let rhs = binomial(&prev, p - 1) + binomial(&prev, p);
        prop_assert_eq!(lhs, rhs);
    }

    // upper negation: C(alpha, p) = (-1)^p C(p - alpha - 1, p)
    #[test]
    fn upper_negation(alpha in small_rat(), p in 0i64..=15) {
        let lhs = binomial(&alpha, p);
        let flipped = rat(p) - &alpha - rat(1);
        let mut rhs = binomial(&flipped, p);
        if p % 2 != 0 {
            rhs = -rhs;
        }
        prop_assert_eq!(lhs, rhs);
    }

    // the limit convention only diverges from the plain one at p < 0
    #[test]
    fn conventions_agree_for_nonnegative_p(alpha in small_rat(), p in 0i64..=15) {
        prop_assert_eq!(binomial(&alpha, p), binomial_ext(&alpha, p));
    }

    // for p < 0 the plain convention is 0 and the limit convention is
    // supported exactly on the integer band p <= top <= -1
    #[test]
    fn negative_p_band(top in -12i64..=6, p in -12i64..=-1) {
        let a = rat(top);
        prop_assert_eq!(binomial(&a, p), Rat::default());
        let v = binomial_ext(&a, p);
        if p <= top && top <= -1 {
            let mut want = Rat::from_integer(binom_int(-p - 1, top - p));
            if (top - p) % 2 != 0 {
                want = -want;
            }
            prop_assert_eq!(v, want);
            prop_assert_ne!(binomial_ext(&a, p), Rat::default());
        } else {
            prop_assert_eq!(v, Rat::default());
        }
        // non-integer top: always 0 below the diagonal
        let half = &a + ratio(1, 2);
        prop_assert_eq!(binomial_ext(&half, p), Rat::default());
    }

    // the integer fast paths match the rational definitions
    #[test]
    fn integer_paths_match(top in -30i64..=30, p in -8i64..=16) {
        prop_assert_eq!(
            Rat::from_integer(binom_int(top, p)),
            binomial(&rat(top), p)
        );
        prop_assert_eq!(
            Rat::from_integer(binom_int_ext(top, p)),
            binomial_ext(&rat(top), p)
        );
    }

    // Gamma(a + j + k)/Gamma(a) telescopes through any midpoint and
    // equals the rising factorial; flipping the arguments inverts it
    #[test]
    fn gamma_ratio_telescopes(num in 1i64..=9, den in 2i64..=5, j in 0u64..=6, k in 0u64..=6) {
        let a = ratio(num, den);
        let mid = &a + rat(j as i64);
        let top = &a + rat((j + k) as i64);
        let whole = gamma_ratio(&a, &top).unwrap();
        let left = gamma_ratio(&mid, &top).unwrap();
        let right = gamma_ratio(&a, &mid).unwrap();
        prop_assert_eq!(whole.clone(), left * right);
        prop_assert_eq!(whole.clone(), pochhammer(&a, j + k));
        let inv = gamma_ratio(&top, &a).unwrap();
        prop_assert_eq!(inv * whole, Rat::from_integer(1.into()));
    }

    #[test]
    fn factored_scalar_round_trips(r in nonzero_rat()) {
        let fs = FactoredScalar::from_rat(&r);
        prop_assert_eq!(fs.finalize().unwrap(), r);
    }

    #[test]
    fn factored_scalar_multiplies(r in nonzero_rat(), s in nonzero_rat()) {
        let mut fs = FactoredScalar::from_rat(&r);
        fs.mul(&FactoredScalar::from_rat(&s));
        prop_assert_eq!(fs.finalize().unwrap(), &r * &s);
        let mut fd = FactoredScalar::from_rat(&r);
        fd.div(&FactoredScalar::from_rat(&s));
        prop_assert_eq!(fd.finalize().unwrap(), &r / &s);
    }

    // evaluation is a ring homomorphism
    #[test]
    fn poly_eval_homomorphism(p in poly(), q in poly(), x in small_rat()) {
        prop_assert_eq!(p.mul(&q).eval(&x), p.eval(&x) * q.eval(&x));
        prop_assert_eq!(p.add(&q).eval(&x), p.eval(&x) + q.eval(&x));
    }

    #[test]
    fn poly_exact_div_inverts_mul(p in poly(), q in nonzero_poly()) {
        let prod = p.mul(&q);
        let back = prod.exact_div(&q).unwrap();
        prop_assert!(back.sub(&p).is_zero());
    }

    #[test]
    fn poly_degree_adds_under_mul(p in nonzero_poly(), q in nonzero_poly()) {
        let prod = p.mul(&q);
        prop_assert_eq!(
            prod.degree(),
            Some(p.degree().unwrap() + q.degree().unwrap())
        );
    }

    #[test]
    fn poly_div_rem_reconstructs(p in poly(), q in nonzero_poly()) {
        let (quo, rem) = p.div_rem(&q).unwrap();
        let back = quo.mul(&q).add(&rem);
        prop_assert!(back.sub(&p).is_zero());
        if !rem.is_zero() {
            prop_assert!(rem.degree().unwrap() < q.degree().unwrap());
        }
    }

    #[test]
    fn mpoly_ring_laws(a in mpoly(), b in mpoly(), c in mpoly()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        let left = a.mul(&b.add(&c));
        let right = a.mul(&b).add(&a.mul(&c));
        prop_assert!(left.sub(&right).is_zero());
    }

    #[test]
    fn mpoly_eval_matches_structure(
        a in mpoly(),
        b in mpoly(),
        x in small_rat(),
        y in small_rat(),
        z in small_rat(),
    ) {
        let at = [x, y, z];
        let va = a.eval(&at).unwrap();
        let vb = b.eval(&at).unwrap();
        prop_assert_eq!(a.mul(&b).eval(&at).unwrap(), &va * &vb);
        prop_assert_eq!(a.add(&b).eval(&at).unwrap(), &va + &vb);
    }

    #[test]
    fn mpoly_exact_div_inverts_mul(a in mpoly(), b in mpoly()) {
        prop_assume!(!b.is_zero());
        let prod = a.mul(&b);
        let back = prod.exact_div(&b).unwrap();
        prop_assert!(back.sub(&a).is_zero());
    }
}

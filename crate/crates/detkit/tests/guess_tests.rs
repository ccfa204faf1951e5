//! Recurrence checks on real cofactor data: the two displayed bivariate
//! recurrences for the warmup family, the symbolic ratio recurrence, and
//! the degree/points budget facts for fitting on Di Francesco cofactors.

use detkit::exact::{rat, ratio};
use detkit::guess::{
    check_recurrence, cofactor_table, fit_recurrence, in_span, parse_support, GridPoint,
    Recurrence, ShiftSupport,
};
use detkit::{FamilySpec, MPoly, Rat};

/// Term table for a polynomial in (n, j, a, x), instantiated at a = 5,
/// x = 2/3. Rows are (coeff, deg n, deg j, deg a, deg x).
fn poly4(terms: &[(i64, u32, u32, u32, u32)]) -> MPoly {
    let a = rat(5);
    let x = ratio(2, 3);
    let mut acc = MPoly::zero();
    for &(c, dn, dj, da, dx) in terms {
        let mut s = rat(c);
        for _ in 0..da {
            s *= &a;
        }
        for _ in 0..dx {
            s *= &x;
        }
        acc = acc.add(&MPoly::monomial([dn as i32, dj as i32, 0], s));
    }
    acc
}

// a*j^2 + 2*a*j*x + a*j + a*x^2 + a*x - x^2 - x, the quadratic factor
// shared by both displayed recurrences
fn quadratic_factor() -> MPoly {
    poly4(&[
        (1, 0, 2, 1, 0),
        (2, 0, 1, 1, 1),
        (1, 0, 1, 1, 0),
        (1, 0, 0, 1, 2),
        (1, 0, 0, 1, 1),
        (-1, 0, 0, 0, 2),
        (-1, 0, 0, 0, 1),
    ])
}

/// First displayed recurrence, relating c(n+1,j), c(n,j+1), c(n,j).
fn warmup_rec_one() -> Recurrence {
    let a1 = poly4(&[(1, 0, 0, 0, 0), (-1, 0, 0, 1, 0)])
        .mul(&poly4(&[(1, 1, 0, 0, 0)]))
        .mul(&poly4(&[(1, 0, 1, 0, 0), (-1, 1, 0, 0, 0)]))
        .mul(&quadratic_factor());
    let b1 = poly4(&[
        (1, 0, 1, 0, 0),
        (-1, 1, 0, 0, 0),
        (1, 0, 0, 0, 1),
        (2, 0, 0, 0, 0),
    ])
    .mul(&poly4(&[
        (1, 0, 3, 1, 0),
        (-2, 1, 2, 1, 0),
        (2, 0, 2, 1, 1),
        (1, 0, 2, 1, 0),
        (-4, 1, 1, 1, 1),
        (1, 0, 1, 1, 2),
        (1, 0, 1, 1, 1),
        (-2, 1, 0, 1, 2),
        (-1, 0, 1, 0, 2),
        (1, 0, 1, 0, 1),
        (2, 1, 0, 0, 2),
    ]))
    .neg();
    let c1 = poly4(&[
        (1, 2, 2, 2, 0),
        (1, 1, 2, 2, 1),
        (-1, 1, 2, 2, 0),
        (2, 2, 1, 2, 1),
        (1, 2, 1, 2, 0),
        (2, 1, 1, 2, 2),
        (-1, 1, 1, 2, 1),
        (-1, 1, 1, 2, 0),
        (1, 2, 0, 2, 2),
        (1, 2, 0, 2, 1),
        (1, 1, 0, 2, 3),
        (-1, 1, 0, 2, 1),
        (1, 0, 4, 1, 0),
        (-4, 1, 3, 1, 0),
        (2, 0, 3, 1, 1),
        (4, 0, 3, 1, 0),
        (3, 2, 2, 1, 0),
        (-9, 1, 2, 1, 1),
        (-9, 1, 2, 1, 0),
        (1, 0, 2, 1, 2),
        (5, 0, 2, 1, 1),
        (5, 0, 2, 1, 0),
        (6, 2, 1, 1, 1),
        (3, 2, 1, 1, 0),
        (-6, 1, 1, 1, 2),
        (-11, 1, 1, 1, 1),
        (-5, 1, 1, 1, 0),
        (1, 0, 1, 1, 2),
        (3, 0, 1, 1, 1),
        (2, 0, 1, 1, 0),
        (2, 2, 0, 1, 2),
        (-2, 1, 0, 1, 3),
        (-4, 1, 0, 1, 2),
        (-1, 0, 2, 0, 2),
        (1, 0, 2, 0, 1),
        (4, 1, 1, 0, 2),
        (-1, 0, 1, 0, 2),
        (1, 0, 1, 0, 1),
        (-3, 2, 0, 0, 2),
        (-1, 2, 0, 0, 1),
        (1, 1, 0, 0, 3),
        (4, 1, 0, 0, 2),
        (1, 1, 0, 0, 1),
    ]);
    Recurrence::new(
        ShiftSupport::bi(vec![(1, 0), (0, 1), (0, 0)]).unwrap(),
        vec![a1, b1, c1],
    )
    .unwrap()
}

/// Second displayed recurrence, pure in j: c(n,j+2), c(n,j+1), c(n,j).
fn warmup_rec_two() -> Recurrence {
    let a2 = quadratic_factor().mul(&poly4(&[
        (1, 0, 1, 0, 0),
        (-1, 1, 0, 0, 0),
        (1, 0, 0, 0, 1),
        (3, 0, 0, 0, 0),
    ]));
    let b2 = poly4(&[
        (1, 0, 3, 2, 0),
        (3, 0, 2, 2, 1),
        (3, 0, 2, 2, 0),
        (3, 0, 1, 2, 2),
        (6, 0, 1, 2, 1),
        (2, 0, 1, 2, 0),
        (1, 0, 0, 2, 3),
        (3, 0, 0, 2, 2),
        (2, 0, 0, 2, 1),
        (-2, 0, 3, 1, 0),
        (2, 1, 2, 1, 0),
        (-5, 0, 2, 1, 1),
        (-8, 0, 2, 1, 0),
        (4, 1, 1, 1, 1),
        (4, 1, 1, 1, 0),
        (-5, 0, 1, 1, 2),
        (-14, 0, 1, 1, 1),
        (-8, 0, 1, 1, 0),
        (2, 1, 0, 1, 2),
        (2, 1, 0, 1, 1),
        (-2, 0, 0, 1, 3),
        (-8, 0, 0, 1, 2),
        (-6, 0, 0, 1, 1),
        (2, 0, 1, 0, 2),
        (2, 0, 1, 0, 1),
        (-2, 1, 0, 0, 2),
        (-2, 1, 0, 0, 1),
        (1, 0, 0, 0, 3),
        (5, 0, 0, 0, 2),
        (4, 0, 0, 0, 1),
    ]);
    let c2 = poly4(&[(1, 0, 0, 1, 0), (-1, 0, 0, 0, 0)])
        .mul(&poly4(&[
            (1, 0, 1, 0, 0),
            (-1, 1, 0, 0, 0),
            (1, 0, 0, 0, 0),
        ]))
        .mul(&poly4(&[
            (1, 0, 2, 1, 0),
            (2, 0, 1, 1, 1),
            (3, 0, 1, 1, 0),
            (1, 0, 0, 1, 2),
            (3, 0, 0, 1, 1),
            (2, 0, 0, 1, 0),
            (-1, 0, 0, 0, 2),
            (-1, 0, 0, 0, 1),
        ]))
        .neg();
    Recurrence::new(
        ShiftSupport::bi(vec![(0, 2), (0, 1), (0, 0)]).unwrap(),
        vec![a2, b2, c2],
    )
    .unwrap()
}

fn warmup_table() -> detkit::guess::DataTable {
    cofactor_table(&FamilySpec::warmup_at(5, ratio(2, 3)), 12).unwrap()
}

#[test]
fn warmup_cofactors_at_a_rational_point() {
    let t = warmup_table();
    // c_{2,0} = -x, c_{3,0} = (a*x^2+a*x-x^2+x)/(2(a-1)),
    // c_{3,1} = (-a*x-a+x)/(a-1) at (a,x) = (5, 2/3)
    assert_eq!(t.get(&GridPoint::NJ(2, 0)), Some(&ratio(-2, 3)));
    assert_eq!(t.get(&GridPoint::NJ(3, 0)), Some(&ratio(13, 18)));
    assert_eq!(t.get(&GridPoint::NJ(3, 1)), Some(&ratio(-23, 12)));
    for n in 1..=12 {
        assert_eq!(t.get(&GridPoint::NJ(n, n - 1)), Some(&rat(1)));
    }
}

#[test]
fn displayed_warmup_recurrences_hold_on_the_table() {
    let t = warmup_table();
    let r1 = check_recurrence(&warmup_rec_one(), &t).unwrap();
    assert!(r1.passed(), "failures: {:?}", r1.failures);
    assert_eq!(r1.checked, 55);
    let r2 = check_recurrence(&warmup_rec_two(), &t).unwrap();
    assert!(r2.passed(), "failures: {:?}", r2.failures);
    assert_eq!(r2.checked, 55);
}

#[test]
fn fit_recovers_the_first_displayed_recurrence() {
    let t = warmup_table();
    let support = ShiftSupport::bi(vec![(1, 0), (0, 1), (0, 0)]).unwrap();
    let fit = fit_recurrence(&t, &support, 4).unwrap();
    assert!(!fit.basis.is_empty(), "{}", fit.tag);
    assert!(in_span(&fit.basis, &warmup_rec_one()));
}

#[test]
fn ratio_recurrence_symbolic_in_the_base() {
    // with s(n) = (a-1)^(n-1), the three-term recurrence
    //   (a-1)*n*s(n+2) - (a^2*n - 6*a*n + 2*a + n)*s(n+1)
    //     - 2*(a-1)*a*(2*n-1)*s(n) = 0
    // reduces, after dividing by s(n), to a polynomial identity in n, a
    let n = MPoly::var(0);
    let a = MPoly::var(1);
    let am1 = a.sub(&MPoly::constant(rat(1)));
    let lead = am1.mul(&n).mul(&am1.pow(3));
    let mid = a
        .mul(&a)
        .mul(&n)
        .sub(&a.mul(&n).scale(&rat(6)))
        .add(&a.scale(&rat(2)))
        .add(&n)
        .mul(&am1.pow(2));
    let last = am1
        .mul(&a)
        .mul(&n.scale(&rat(2)).sub(&MPoly::constant(rat(1))))
        .scale(&rat(2))
        .mul(&am1);
    let residual = lead.sub(&mid).sub(&last);
    assert!(residual.is_zero(), "residual: {:?}", residual);
}

#[test]
fn difran_cofactor_fits_have_no_room_at_small_depth() {
    // cofactor data to n = 20 leaves 153 instantiable points for the
    // (0,2)/(2,0)-style supports and 171 for the mixed one; the
    // degree-11 coefficient ansatz (312 unknowns) cannot be posed, and
    // the largest posable degrees find an empty basis
    let t = cofactor_table(&FamilySpec::difrancesco(), 20).unwrap();
    for (text, deg, pts) in [
        ("Sj2,Sn,Sj,1", 6usize, 153usize),
        ("SnSj,Sn,Sj,1", 7, 171),
        ("Sn2,Sn,Sj,1", 6, 153),
    ] {
        let support = parse_support(text).unwrap();
        let fit = fit_recurrence(&t, &support, deg).unwrap();
        assert_eq!(fit.window_points + fit.held_out_points, pts, "{text}");
        assert!(fit.basis.is_empty(), "{text} deg {deg}: {}", fit.tag);
        assert_eq!(fit.tag, "no recurrence with this support and degree");
        let err = fit_recurrence(&t, &support, 11).unwrap_err();
        assert!(err.contains("insufficient data"), "{err}");
    }
}

#[test]
fn diagonal_recurrence_fits_on_difran_diagonal() {
    // the main-diagonal cofactors are identically 1, so s(n+1) - s(n)
    // fits with plenty of held-out confirmation
    let t = cofactor_table(&FamilySpec::difrancesco(), 20).unwrap();
    let mut diag = detkit::guess::DataTable::new_uni();
    for n in 1..=20i64 {
        diag.insert(GridPoint::N(n), t.get(&GridPoint::NJ(n, n - 1)).unwrap().clone())
            .unwrap();
    }
    let fit = fit_recurrence(&diag, &ShiftSupport::uni(vec![1, 0]).unwrap(), 0).unwrap();
    assert_eq!(fit.basis.len(), 1);
    let planted = Recurrence::new(
        ShiftSupport::uni(vec![1, 0]).unwrap(),
        vec![MPoly::one(), MPoly::one().neg()],
    )
    .unwrap();
    assert!(in_span(&fit.basis, &planted));
}

#[test]
fn rec_two_extends_nowhere_past_its_domain() {
    // pad the table with zeros past the diagonal: the first recurrence
    // tolerates the extension, the second does not claim to
    let mut t = warmup_table();
    for n in 1..=12i64 {
        t.insert(GridPoint::NJ(n, n), Rat::from_integer(0.into()))
            .unwrap();
    }
    let r1 = check_recurrence(&warmup_rec_one(), &t).unwrap();
    assert!(r1.passed(), "failures: {:?}", r1.failures);
    assert!(r1.checked > 55);
}

//! Regression pins for the closed-form evaluations. Every constant in
//! this file was computed with a separate bignum implementation and is
//! asserted digit for digit, so a silent change in the entry formulas,
//! the determinant engine, or the product formulas trips a test here.

use detkit::closedforms::{
    eval_rhs, identity_spec, pol_extract, IdentityId, RhsValue, XArg,
};
use detkit::closedforms::ms1_det_poly;
use detkit::detengine::det_bareiss;
use detkit::exact::{parse_rat, rat, ratio};
use detkit::families::{build_family, AnyMatrix};
use detkit::guess::{cofactor_table, GridPoint};
use detkit::{FamilySpec, Rat};

fn det_of(spec: &FamilySpec, n: usize) -> Rat {
    match build_family(spec, n) {
        AnyMatrix::Num(m) => det_bareiss(&m),
        other => panic!("expected a numeric matrix, got {}", other.ring_tag()),
    }
}

fn rhs_num(id: &IdentityId, n: usize, x: Option<&XArg>) -> Rat {
    match eval_rhs(id, n, x).unwrap() {
        RhsValue::Num(r) => r,
        other => panic!("expected a numeric closed form, got {}", other.to_text()),
    }
}

fn q(s: &str) -> Rat {
    parse_rat(s).unwrap()
}

const DIFRAN_DETS: [&str; 12] = [
    "2",
    "8",
    "120",
    "6656",
    "1357824",
    "1016070144",
    "2784878919680",
    "27931246067712000",
    "1024495760766821990400",
    "137366569884903044850647040",
    "67308382944473527849413393776640",
    "120496514548961344585865412360108244992",
];

#[test]
fn difrancesco_values_and_ratios() {
    let spec = FamilySpec::difrancesco();
    let dets: Vec<Rat> = (1..=12).map(|n| det_of(&spec, n)).collect();
    for (n, want) in DIFRAN_DETS.iter().enumerate() {
        assert_eq!(dets[n], q(want), "n={}", n + 1);
        assert_eq!(rhs_num(&IdentityId::DiFran, n + 1, None), dets[n]);
    }
    let ratios = ["4", "15", "832/15", "204", "9728/13", "16445/6"];
    for (i, want) in ratios.iter().enumerate() {
        assert_eq!(&dets[i + 1] / &dets[i], q(want), "ratio at n={}", i + 2);
    }
}

// Determinant values of the six integer specs with product formulas,
// n = 1..8, in the fixed a..f order of the catalog.
const TWO_PARAM_DETS: [((i64, i64, i64, i64), [&str; 8]); 6] = [
    (
        (-2, 0, -1, -1),
        ["-2", "-8", "-160", "-12800", "-3913728", "-4492099584", "-19179340038144", "-303005862513868800"],
    ),
    (
        (0, 2, 3, -1),
        ["5", "240", "60060", "66533376", "303933966336", "5514060260966400", "388475884248072192000", "104749569059603714408448000"],
    ),
    (
        (1, 1, 0, -2),
        ["-2", "-6", "-64", "-2464", "-344064", "-174637056", "-322592309248", "-2170239760465920"],
    ),
    (
        (1, 1, 1, -1),
        ["1", "4", "60", "3328", "678912", "508035072", "1392439459840", "13965623033856000"],
    ),
    (
        (2, 1, 2, 0),
        ["2", "14", "352", "32032", "10584064", "12719398912", "55647173345280", "886838883935846400"],
    ),
    (
        (0, 1, 1, -1),
        ["3", "42", "2310", "480480", "372468096", "1068429508608", "11295207815823360", "438985247548243968000"],
    ),
];

#[test]
fn two_by_two_catalog_values() {
    for (k, (params, dets)) in TWO_PARAM_DETS.iter().enumerate() {
        let id = IdentityId::Det22(k as u8);
        let spec = identity_spec(&id).unwrap();
        assert_eq!(
            spec.to_text(),
            FamilySpec::d(params.0, params.1, params.2, params.3).to_text()
        );
        for (i, want) in dets.iter().enumerate() {
            let n = i + 1;
            let d = det_of(&spec, n);
            assert_eq!(d, q(want), "{} n={n}", id.to_text());
            assert_eq!(rhs_num(&id, n, None), d, "{} rhs n={n}", id.to_text());
        }
    }
}

#[test]
fn four_parameter_conjecture_values() {
    let id = IdentityId::Conj4j;
    let spec = identity_spec(&id).unwrap();
    let dets = [
        "2",
        "16",
        "1024",
        "524288",
        "2146959360",
        "70300024700928",
        "18402552502365978624",
        "38505586005508728366825472",
    ];
    for (i, want) in dets.iter().enumerate() {
        let n = i + 1;
        let d = det_of(&spec, n);
        assert_eq!(d, q(want), "n={n}");
        assert_eq!(rhs_num(&id, n, None), d, "rhs n={n}");
    }
}

#[test]
fn parametric_forms_at_sample_points() {
    // x = 7/2, n = 5
    let x = ratio(7, 2);
    let spec = identity_spec(&IdentityId::CK1).unwrap().with_x(x.clone());
    let d = det_of(&spec, 5);
    assert_eq!(d, q("36622463880145/16384"));
    assert_eq!(rhs_num(&IdentityId::CK1, 5, Some(&XArg::Num(x))), d);

    // x = 3, n = 6
    let x = rat(3);
    let spec = identity_spec(&IdentityId::CK2).unwrap().with_x(x.clone());
    let d = det_of(&spec, 6);
    assert_eq!(d, q("18193072128"));
    assert_eq!(rhs_num(&IdentityId::CK2, 6, Some(&XArg::Num(x))), d);
}

// Monic polynomial parts of the determinant prefactor split, ascending
// coefficients, n = 1..7. Each has degree 2(n-1).
const POLS: [&[&str]; 7] = [
    &["1"],
    &["20", "31/3", "1"],
    &["2560/3", "6956/9", "229", "26", "1"],
    &["573440/9", "2103256/27", "319910/9", "69905/9", "2587/3", "47", "1"],
    &[
        "200704000/27", "897670160/81", "19636988/3", "54355160/27",
        "9574583/27", "332180/9", "6722/3", "220/3", "1",
    ],
    &[
        "101934694400/81", "526818125440/243", "13782722224/9", "1766124220/3",
        "1235120420/9", "61167395/3", "1967913", "368230/3", "4770", "105", "1",
    ],
    &[
        "71283638272000/243", "411757232768000/729", "110856036735040/243",
        "50086222253056/243", "1576742602412/27", "98917560220/9",
        "12747000005/9", "379769698/3", "7831643", "986560/3", "26825/3",
        "142", "1",
    ],
];

#[test]
fn extracted_polynomial_parts() {
    for (i, want) in POLS.iter().enumerate() {
        let n = i + 1;
        let rec = pol_extract(n).unwrap();
        assert_eq!(rec.pol.degree(), Some(2 * n - 2), "degree at n={n}");
        assert_eq!(rec.pol.leading(), Rat::from_integer(1.into()), "monic at n={n}");
        for (k, c) in want.iter().enumerate() {
            assert_eq!(rec.pol.coeff(k), q(c), "n={n} coeff {k}");
        }
        // the split multiplies back to the raw determinant polynomial
        let raw = ms1_det_poly(n);
        let back = rec
            .prefactor_poly
            .mul(&rec.pol)
            .scale(&rec.prefactor_scalar);
        assert!(back.sub(&raw).is_zero(), "split round trip at n={n}");
    }
}

#[test]
fn raw_determinant_polynomial_small_case() {
    let p = ms1_det_poly(2);
    let want = [
        "16", "248/5", "2797/45", "616/15", "557/36", "199/60", "67/180", "1/60",
    ];
    assert_eq!(p.degree(), Some(7));
    for (k, c) in want.iter().enumerate() {
        assert_eq!(p.coeff(k), q(c), "coeff {k}");
    }
}

// First-column-delete cofactors c_{n,j} of the Di Francesco family,
// rows n = 1..8.
const COFACTORS: &[(i64, i64, &str)] = &[
    (1, 0, "1"),
    (2, 0, "-1"),
    (2, 1, "1"),
    (3, 0, "1"),
    (3, 1, "-2"),
    (3, 2, "1"),
    (4, 0, "-16/15"),
    (4, 1, "47/15"),
    (4, 2, "-46/15"),
    (4, 3, "1"),
    (5, 0, "16/13"),
    (5, 1, "-60/13"),
    (5, 2, "85/13"),
    (5, 3, "-54/13"),
    (5, 4, "1"),
    (6, 0, "-20/13"),
    (6, 1, "88/13"),
    (6, 2, "-633/52"),
    (6, 3, "291/26"),
    (6, 4, "-21/4"),
    (6, 5, "1"),
    (7, 0, "2008/969"),
    (7, 1, "-9808/969"),
    (7, 2, "2441/114"),
    (7, 3, "-8107/323"),
    (7, 4, "33115/1938"),
    (7, 5, "-362/57"),
    (7, 6, "1"),
    (8, 0, "-10592/3553"),
    (8, 1, "55360/3553"),
    (8, 2, "-7712/209"),
    (8, 3, "16567/323"),
    (8, 4, "-159022/3553"),
    (8, 5, "5062/209"),
    (8, 6, "-82/11"),
    (8, 7, "1"),
];

#[test]
fn difrancesco_cofactor_grid() {
    let table = cofactor_table(&FamilySpec::difrancesco(), 8).unwrap();
    assert_eq!(table.len(), COFACTORS.len());
    for &(n, j, want) in COFACTORS {
        let v = table.get(&GridPoint::NJ(n, j)).unwrap();
        assert_eq!(*v, q(want), "c_{{{n},{j}}}");
    }
}

// lhs(n) = c * rhs(n + k) for n >= 4, raw determinants on both sides.
const SHIFT_RELATIONS: &[((i64, i64, i64, i64), (i64, i64, i64, i64), i64, &str)] = &[
    ((2, 1, 2, 0), (1, 1, -1, -3), 1, "1/8"),
    ((2, 1, 2, 0), (0, 1, -4, -6), 2, "1/40"),
    ((2, 1, 2, 0), (1, 2, -4, -8), 2, "-1/24576"),
    ((1, 1, 1, -1), (2, 1, 1, -1), 0, "1"),
    ((1, 1, 1, -1), (0, 1, -2, -4), 1, "1/3"),
    ((1, 1, 1, -1), (1, 1, -2, -4), 1, "-1/32"),
    ((1, 1, 1, -1), (1, 2, -2, -6), 1, "-1/224"),
    ((1, 1, 1, -1), (0, 1, -5, -7), 2, "-1/168"),
    ((1, 1, 1, -1), (0, 2, -5, -9), 2, "-1/3696"),
    ((1, 1, 1, -1), (1, 2, -5, -9), 2, "-1/337920"),
    ((1, 1, 0, -2), (0, 1, -3, -5), 1, "1/5"),
    ((1, 1, 0, -2), (1, 2, -3, -7), 1, "1/1008"),
    ((-2, 1, 0, -2), (0, 2, 3, -1), -1, "1"),
    ((2, 1, 1, -1), (4, 2, 4, 0), -1, "1"),
    ((1, 1, -2, -4), (3, 2, 1, -3), -1, "-16/5"),
    ((1, 1, -2, -4), (5, 3, 4, -2), -2, "64/3"),
    ((1, 1, -2, -4), (7, 4, 7, -1), -3, "-128"),
    ((1, 1, -1, -3), (3, 2, 2, -2), -1, "-4"),
    ((1, 1, -1, -3), (5, 3, 5, -1), -2, "16"),
    ((1, 1, 0, -2), (3, 2, 3, -1), -1, "-2"),
];

#[test]
fn shift_relations_between_specs() {
    for &(a, b, k, c) in SHIFT_RELATIONS {
        let sa = FamilySpec::d(a.0, a.1, a.2, a.3);
        let sb = FamilySpec::d(b.0, b.1, b.2, b.3);
        let c = q(c);
        for n in 4..=8i64 {
            let m = n + k;
            if m < 1 {
                continue;
            }
            let lhs = det_of(&sa, n as usize);
            let rhs = det_of(&sb, m as usize);
            assert_eq!(lhs, &c * &rhs, "{a:?} -> {b:?} shift {k} at n={n}");
        }
    }
}

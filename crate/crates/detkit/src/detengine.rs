//! Determinant machinery: fraction-free (Bareiss) elimination with row
//! content stripping over any exact ring, a cofactor-expansion oracle for
//! small matrices, and cofactor sequences c_{n,j} solved from the
//! elimination system together with the Laplace determinant ratio.

use num::{One, Signed, Zero};

use crate::exact::Rat;
use crate::families::{build_family, AnyMatrix, FamilySpec, Matrix};
use crate::poly::{rat_gcd, MPoly, Poly, RatFunc, Ring};

/// Ring with enough structure for content-stripped Bareiss elimination.
pub trait DetEntry: Ring {
    /// Nonnegative rational content; zero only for the zero element.
    fn rat_content(&self) -> Rat;
    fn scale_rat(&self, s: &Rat) -> Self;
}

impl DetEntry for Rat {
    fn rat_content(&self) -> Rat {
        self.abs()
    }
    fn scale_rat(&self, s: &Rat) -> Self {
        self * s
    }
}

impl DetEntry for Poly {
    fn rat_content(&self) -> Rat {
        if self.is_zero() {
            <Rat as Zero>::zero()
        } else {
            self.content_and_primitive().unwrap().0.abs()
        }
    }
    fn scale_rat(&self, s: &Rat) -> Self {
        self.scale(s)
    }
}

impl DetEntry for MPoly {
    fn rat_content(&self) -> Rat {
        if self.is_zero() {
            <Rat as Zero>::zero()
        } else {
            self.content_and_primitive().unwrap().0.abs()
        }
    }
    fn scale_rat(&self, s: &Rat) -> Self {
        self.scale(s)
    }
}

/// Exact determinant by fraction-free elimination. Each row's rational
/// content is stripped first and multiplied back into the result, which
/// keeps intermediate entries primitive. Pivot search takes the first
/// nonzero entry; row swaps flip the tracked sign.
pub fn det_bareiss<T: DetEntry>(m: &Matrix<T>) -> T {
    let n = m.n;
    if n == 0 {
        return T::one();
    }
    let mut content = <Rat as One>::one();
    let mut a: Vec<Vec<T>> = Vec::with_capacity(n);
    for row in &m.entries {
        let mut g = <Rat as Zero>::zero();
        for e in row {
            g = rat_gcd(&g, &e.rat_content());
            if g == <Rat as One>::one() {
                break;
            }
        }
        if Zero::is_zero(&g) {
            return T::zero(); // zero row
        }
        content *= &g;
        let inv = <Rat as One>::one() / g;
        a.push(row.iter().map(|e| e.scale_rat(&inv)).collect());
    }
    let mut sign = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        let pivot = (k..n).find(|&r| !a[r][k].is_zero());
        let r = match pivot {
            Some(r) => r,
            None => return T::zero(),
        };
        if r != k {
            a.swap(r, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = t
                    .exact_div(&prev)
                    .expect("fraction-free elimination divides exactly");
            }
            a[i][k] = T::zero();
        }
        prev = a[k][k].clone();
    }
    let mut det = a[n - 1][n - 1].scale_rat(&content);
    if sign {
        det = det.neg();
    }
    det
}

/// Determinant of a fraction matrix: each row is cleared to polynomials by
/// its distinct denominators (the extracted factor is tracked), Bareiss
/// runs over MPoly, and the factor divides back out at the end.
pub fn det_bareiss_ratfunc(m: &Matrix<RatFunc>) -> RatFunc {
    let n = m.n;
    let mut factor = MPoly::one();
    let mut rows: Vec<Vec<MPoly>> = Vec::with_capacity(n);
    for row in &m.entries {
        let mut dens: Vec<&MPoly> = vec![];
        for e in row {
            if !dens.iter().any(|d| **d == e.den) {
                dens.push(&e.den);
            }
        }
        let mut d = MPoly::one();
        for den in &dens {
            d = d.mul(den);
        }
        factor = factor.mul(&d);
        rows.push(
            row.iter()
                .map(|e| {
                    e.num.mul(&d.exact_div(&e.den).expect("denominator divides the row product"))
                })
                .collect(),
        );
    }
    let det = det_bareiss(&Matrix { n, entries: rows });
    RatFunc::new(det, factor).expect("nonzero denominator")
}

/// Reference determinant by recursive Laplace expansion along the first
/// row. Rejects dimensions above 7; meant for cross-checking only.
pub fn det_cofactor_oracle<T: Ring>(m: &Matrix<T>) -> Result<T, String> {
    if m.n > 7 {
        return Err(format!("cofactor oracle limited to n <= 7, got {}", m.n));
    }
    fn expand<T: Ring>(rows: &[Vec<T>], cols: &[usize]) -> T {
        if cols.is_empty() {
            return T::one();
        }
        let mut acc = T::zero();
        for (k, &c) in cols.iter().enumerate() {
            let e = &rows[0][c];
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols
                .iter()
                .copied()
                .filter(|&x| x != c)
                .collect();
            let minor = expand(&rows[1..], &rest);
            let term = e.mul(&minor);
            acc = if k % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        acc
    }
    let cols: Vec<usize> = (0..m.n).collect();
    Ok(expand(&m.entries, &cols))
}

/// A scalar that is either a rational or a fraction of polynomials,
/// depending on whether symbolic parameters are present.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Num(Rat),
    Sym(RatFunc),
}

impl Scalar {
    pub fn to_text(&self) -> String {
        match self {
            Scalar::Num(r) => r.to_string(),
            Scalar::Sym(f) => f.to_text(),
        }
    }

    pub fn as_num(&self) -> Option<&Rat> {
        match self {
            Scalar::Num(r) => Some(r),
            Scalar::Sym(_) => None,
        }
    }
}

/// Determinant of a family matrix in whatever ring it was built.
#[derive(Debug, Clone, PartialEq)]
pub enum DetValue {
    Num(Rat),
    PolyX(Poly),
    Multi(MPoly),
}

impl DetValue {
    pub fn to_text(&self) -> String {
        match self {
            DetValue::Num(r) => r.to_string(),
            DetValue::PolyX(p) => p.to_text("x"),
            DetValue::Multi(m) => m.to_text(),
        }
    }
}

pub fn det_any(m: &AnyMatrix) -> DetValue {
    match m {
        AnyMatrix::Num(m) => DetValue::Num(det_bareiss(m)),
        AnyMatrix::PolyX(m) => DetValue::PolyX(det_bareiss(m)),
        AnyMatrix::Multi(m) => DetValue::Multi(det_bareiss(m)),
    }
}

/// Cofactor sequence c_{n,0..n-1} normalized by c_{n,n-1} = 1: the kernel
/// vector of the first n-1 rows of the family matrix.
#[derive(Debug, Clone)]
pub enum CofactorSequence {
    Num(Vec<Rat>),
    Sym(Vec<RatFunc>),
}

impl CofactorSequence {
    pub fn len(&self) -> usize {
        match self {
            CofactorSequence::Num(v) => v.len(),
            CofactorSequence::Sym(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value_text(&self, j: usize) -> String {
        match self {
            CofactorSequence::Num(v) => v[j].to_string(),
            CofactorSequence::Sym(v) => v[j].to_text(),
        }
    }
}

/// Exact Gaussian solve of a square rational system; errors on a singular
/// matrix.
pub fn solve_square_rat(a: &[Vec<Rat>], b: &[Rat]) -> Result<Vec<Rat>, String> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a.to_vec();
    let mut rhs = b.to_vec();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !Zero::is_zero(&m[r][k]));
        let r = pivot.ok_or_else(|| "singular leading minor".to_string())?;
        m.swap(r, k);
        rhs.swap(r, k);
        let p = m[k][k].clone();
        for i in 0..n {
            if i == k || Zero::is_zero(&m[i][k]) {
                continue;
            }
            let f = &m[i][k] / &p;
            for j in k..n {
                let t = &m[k][j] * &f;
                m[i][j] -= t;
            }
            let t = &rhs[k] * &f;
            rhs[i] -= t;
        }
    }
    Ok((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

fn to_multi(m: &AnyMatrix) -> Matrix<MPoly> {
    match m {
        AnyMatrix::Num(m) => m.map(|r| MPoly::constant(r.clone())),
        AnyMatrix::PolyX(m) => m.map(|p| p.to_mpoly(0)),
        AnyMatrix::Multi(m) => m.clone(),
    }
}

const SYMBOLIC_COFACTOR_LIMIT: usize = 8;

/// Solve the elimination system: the unique vector c with c_{n-1} = 1
/// and sum_j entry(i,j) c_j = 0 for every row i < n-1.
/// Numeric specs solve over Rat; symbolic specs go through Cramer's rule
/// with Bareiss minors (dimension capped, see errors).
pub fn cofactor_sequence(spec: &FamilySpec, n: usize) -> Result<CofactorSequence, String> {
    assert!(n >= 1);
    let m = build_family(spec, n);
    match &m {
        AnyMatrix::Num(mat) => {
            if n == 1 {
                return Ok(CofactorSequence::Num(vec![<Rat as One>::one()]));
            }
            let a: Vec<Vec<Rat>> = (0..n - 1)
                .map(|i| mat.entries[i][..n - 1].to_vec())
                .collect();
            let b: Vec<Rat> = (0..n - 1).map(|i| -mat.entries[i][n - 1].clone()).collect();
            let mut c = solve_square_rat(&a, &b)?;
            c.push(<Rat as One>::one());
            Ok(CofactorSequence::Num(c))
        }
        _ => {
            if n == 1 {
                return Ok(CofactorSequence::Sym(vec![RatFunc::one()]));
            }
            if n > SYMBOLIC_COFACTOR_LIMIT {
                return Err(format!(
                    "symbolic cofactor sequences limited to n <= {SYMBOLIC_COFACTOR_LIMIT}; \
                     evaluate at rational points instead"
                ));
            }
            let mm = to_multi(&m);
            let block = |replace: Option<usize>| -> Matrix<MPoly> {
                Matrix::build(n - 1, |i, j| {
                    if Some(j) == replace {
                        mm.entries[i][n - 1].neg()
                    } else {
                        mm.entries[i][j].clone()
                    }
                })
            };
            let den = det_bareiss(&block(None));
            if den.is_zero() {
                return Err("singular leading minor".into());
            }
            let mut c = Vec::with_capacity(n);
            for j in 0..n - 1 {
                let num = det_bareiss(&block(Some(j)));
                c.push(RatFunc::new(num, den.clone())?);
            }
            c.push(RatFunc::one());
            Ok(CofactorSequence::Sym(c))
        }
    }
}

/// Laplace expansion of det(A_n) along its last row against the
/// cofactor sequence, sum_j entry(n-1,j) c_{n,j}. Equals
/// det(A_n)/det(A_{n-1}) when the leading minors are nonsingular.
pub fn det_ratio_laplace(spec: &FamilySpec, n: usize) -> Result<Scalar, String> {
    let c = cofactor_sequence(spec, n)?;
    let m = build_family(spec, n);
    match (&m, &c) {
        (AnyMatrix::Num(mat), CofactorSequence::Num(c)) => {
            let mut acc = <Rat as Zero>::zero();
            for j in 0..n {
                acc += &mat.entries[n - 1][j] * &c[j];
            }
            Ok(Scalar::Num(acc))
        }
        (_, CofactorSequence::Sym(c)) => {
            let mm = to_multi(&m);
            let mut acc = RatFunc::zero();
            for j in 0..n {
                let e = RatFunc::from_mpoly(mm.entries[n - 1][j].clone());
                acc = acc.add(&e.mul(&c[j]));
            }
            Ok(Scalar::Sym(acc))
        }
        _ => unreachable!("ring of matrix and cofactors always agree"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use crate::families::XMode;

    #[test]
    fn bareiss_small() {
        let m = Matrix::build(2, |i, j| rat([[2, 2], [4, 8]][i][j]));
        assert_eq!(det_bareiss(&m), rat(8));
        let id = Matrix::build(5, |i, j| if i == j { rat(1) } else { rat(0) });
        assert_eq!(det_bareiss(&id), rat(1));
    }

    #[test]
    fn oracle_small() {
        let m = Matrix::build(2, |i, j| rat([[1, 2], [3, 4]][i][j]));
        assert_eq!(det_cofactor_oracle(&m).unwrap(), rat(-2));
        let big = Matrix::build(8, |_, _| rat(1));
        assert!(det_cofactor_oracle(&big).is_err());
    }

    #[test]
    fn difrancesco_ratios() {
        let spec = FamilySpec::difrancesco();
        let mut prev = rat(1);
        let mut ratios = vec![];
        for n in 1..=7 {
            let d = match det_any(&build_family(&spec, n)) {
                DetValue::Num(r) => r,
                _ => unreachable!(),
            };
            ratios.push(&d / &prev);
            prev = d;
        }
        assert_eq!(
            ratios[1..].to_vec(),
            vec![
                rat(4),
                rat(15),
                ratio(832, 15),
                rat(204),
                ratio(9728, 13),
                ratio(16445, 6)
            ]
        );
    }

    #[test]
    fn warmup_cofactors() {
        // c_{2,0} = -x, c_{2,1} = 1
        let c = cofactor_sequence(&FamilySpec::warmup(), 2).unwrap();
        match c {
            CofactorSequence::Sym(v) => {
                assert_eq!(v[0], RatFunc::from_mpoly(MPoly::var(0).neg()));
                assert_eq!(v[1], RatFunc::one());
            }
            _ => panic!("warmup is symbolic"),
        }
        // c_{3,1} = (-ax-a+x)/(a-1)
        let c = cofactor_sequence(&FamilySpec::warmup(), 3).unwrap();
        match c {
            CofactorSequence::Sym(v) => {
                let a = MPoly::var(1);
                let x = MPoly::var(0);
                let num = a.mul(&x).neg().sub(&a).add(&x);
                let den = a.sub(&MPoly::one());
                assert_eq!(v[1], RatFunc::new(num, den).unwrap());
            }
            _ => panic!("warmup is symbolic"),
        }
    }

    #[test]
    fn laplace_ratio_examples() {
        let r = det_ratio_laplace(&FamilySpec::difrancesco(), 2).unwrap();
        assert_eq!(r, Scalar::Num(rat(4)));
        // warmup at (a,x) = (4,0), n=3: ratio (a-1)^(n-1) = 9
        let mut spec = FamilySpec::warmup();
        spec.base = crate::families::BaseKind::Num(4);
        spec.x_mode = XMode::Numeric(rat(0));
        let r = det_ratio_laplace(&spec, 3).unwrap();
        assert_eq!(r, Scalar::Num(rat(9)));
    }
}

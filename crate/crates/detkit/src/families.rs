//! Matrix builders. One parameterized entry formula covers the binomial
//! families (letters D, E, F, G distinguished by base and column step),
//! with presets for the named matrices; separate builders produce the
//! Delannoy-number matrices and the q-deformed matrix.

use num::{BigInt, One, Zero};
use once_cell::sync::Lazy;
use std::sync::Mutex;

use crate::exact::{
    binomial_ext, binomial_poly, is_int, parse_rat, rat, Rat,
};
use crate::poly::{MPoly, Poly};

/// Square matrix over an exact ring.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    pub n: usize,
    pub entries: Vec<Vec<T>>,
}

impl<T: Clone> Matrix<T> {
    pub fn build(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let entries = (0..n)
            .map(|i| (0..n).map(|j| f(i, j)).collect())
            .collect();
        Matrix { n, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i][j]
    }

    pub fn map<U: Clone>(&self, mut f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(&mut f).collect())
                .collect(),
        }
    }
}

/// A matrix over whichever ring the family parameters call for.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    /// Integer or rational entries.
    Num(Matrix<Rat>),
    /// Univariate polynomials in x.
    PolyX(Matrix<Poly>),
    /// Multivariate polynomials (x, a, q slots).
    Multi(Matrix<MPoly>),
}

impl AnyMatrix {
    pub fn n(&self) -> usize {
        match self {
            AnyMatrix::Num(m) => m.n,
            AnyMatrix::PolyX(m) => m.n,
            AnyMatrix::Multi(m) => m.n,
        }
    }

    /// Ring label used in reports.
    pub fn ring_tag(&self) -> &'static str {
        match self {
            AnyMatrix::Num(m) => {
                if m.entries.iter().flatten().all(is_int) {
                    "int"
                } else {
                    "rat"
                }
            }
            AnyMatrix::PolyX(_) => "poly",
            AnyMatrix::Multi(_) => "mpoly",
        }
    }

    /// Entry rendered in canonical text form.
    pub fn entry_text(&self, i: usize, j: usize) -> String {
        match self {
            AnyMatrix::Num(m) => m.entries[i][j].to_string(),
            AnyMatrix::PolyX(m) => m.entries[i][j].to_text("x"),
            AnyMatrix::Multi(m) => m.entries[i][j].to_text(),
        }
    }
}

/// Base of the power factor in the first term: a fixed integer or the
/// symbol a.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    Num(i64),
    Symbolic,
}

/// Whether the x offset in the binomial tops is absent, symbolic, or a
/// fixed rational.
#[derive(Debug, Clone, PartialEq)]
pub enum XMode {
    None,
    Symbolic,
    Numeric(Rat),
}

/// Parameters of the unified matrix entry
/// base^(i+beta) * C(x + i + m*j + gamma, m*j + alpha)
///   + sign * C(x + eps2*i + m*j + delta, m*j + alpha),
/// with x present only when x_mode is not None. Binomials with a negative
/// lower index follow the limit convention (see exact::binomial_ext).
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub base: BaseKind,
    pub m: i64,
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
    pub delta: i64,
    pub sign: i8,
    pub eps2: i8,
    pub x_mode: XMode,
}

impl FamilySpec {
    fn letter_family(base: i64, m: i64, alpha: i64, beta: i64, gamma: i64, delta: i64) -> Self {
        FamilySpec {
            base: BaseKind::Num(base),
            m,
            alpha,
            beta,
            gamma,
            delta,
            sign: 1,
            eps2: -1,
            x_mode: XMode::None,
        }
    }

    /// D family: base 2, column step 2.
    pub fn d(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Self {
        Self::letter_family(2, 2, alpha, beta, gamma, delta)
    }

    /// E family: base 3, column step 3.
    pub fn e(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Self {
        Self::letter_family(3, 3, alpha, beta, gamma, delta)
    }

    /// F family: base 4, column step 2.
    pub fn f(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Self {
        Self::letter_family(4, 2, alpha, beta, gamma, delta)
    }

    /// G family: base 2, column step 4.
    pub fn g(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Self {
        Self::letter_family(2, 4, alpha, beta, gamma, delta)
    }

    /// The alternant 2^i*C(i+2j+1, 2j+1) + C(-i+2j+1, 2j+1); equals the
    /// D family at (1,0,1,1).
    pub fn difrancesco() -> Self {
        Self::d(1, 0, 1, 1)
    }

    /// a^i*C(x+i+j-1, j) + C(x-i+j-1, j), symbolic in both a and x.
    pub fn warmup() -> Self {
        FamilySpec {
            base: BaseKind::Symbolic,
            m: 1,
            alpha: 0,
            beta: 0,
            gamma: -1,
            delta: -1,
            sign: 1,
            eps2: -1,
            x_mode: XMode::Symbolic,
        }
    }

    /// The warmup alternant with both parameters fixed to numbers.
    pub fn warmup_at(a: i64, x: Rat) -> Self {
        let mut s = Self::warmup();
        s.base = BaseKind::Num(a);
        s.x_mode = XMode::Numeric(x);
        s
    }

    /// D family with x in the tops: entries C(x+i+2j+gamma, 2j+alpha) etc.
    pub fn d_x(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Self {
        let mut s = Self::d(alpha, beta, gamma, delta);
        s.x_mode = XMode::Symbolic;
        s
    }

    /// F family with x in the tops.
    pub fn f_x(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Self {
        let mut s = Self::f(alpha, beta, gamma, delta);
        s.x_mode = XMode::Symbolic;
        s
    }

    /// Fix x to a rational value (entries become numeric).
    pub fn with_x(&self, x: Rat) -> Self {
        let mut s = self.clone();
        assert!(s.x_mode != XMode::None, "spec has no x to set");
        s.x_mode = XMode::Numeric(x);
        s
    }

    /// Family letter for the (base, step) pair, when one exists.
    pub fn letter(&self) -> Option<char> {
        match (self.base, self.m, self.sign, self.eps2) {
            (BaseKind::Num(2), 2, 1, -1) => Some('D'),
            (BaseKind::Num(3), 3, 1, -1) => Some('E'),
            (BaseKind::Num(4), 2, 1, -1) => Some('F'),
            (BaseKind::Num(2), 4, 1, -1) => Some('G'),
            _ => None,
        }
    }

    /// Canonical text: `D[1,0,1,1]`, `F[3,0,x+3,x+3]`, `Warmup(a,x)`.
    pub fn to_text(&self) -> String {
        if *self == FamilySpec::warmup() {
            return "Warmup(a,x)".into();
        }
        let off = |v: i64| -> String {
            if self.x_mode == XMode::None {
                v.to_string()
            } else if v == 0 {
                "x".into()
            } else if v > 0 {
                format!("x+{v}")
            } else {
                format!("x{v}")
            }
        };
        if let Some(l) = self.letter() {
            return format!(
                "{l}[{},{},{},{}]",
                self.alpha,
                self.beta,
                off(self.gamma),
                off(self.delta)
            );
        }
        let base = match self.base {
            BaseKind::Num(b) => b.to_string(),
            BaseKind::Symbolic => "a".into(),
        };
        format!(
            "Fam(base={base},m={},s={:+},e2={:+})[{},{},{},{}]",
            self.m,
            self.sign,
            self.eps2,
            self.alpha,
            self.beta,
            off(self.gamma),
            off(self.delta)
        )
    }
}

fn parse_offset(s: &str) -> Result<(i64, bool), String> {
    // "3" -> (3, false); "x" -> (0, true); "x+3"/"x-1" -> (±, true)
    let s = s.trim();
    if let Some(rest) = s.strip_prefix('x') {
        if rest.is_empty() {
            return Ok((0, true));
        }
        let v: i64 = rest
            .parse()
            .map_err(|_| format!("bad x offset {s:?}"))?;
        Ok((v, true))
    } else {
        let v: i64 = s.parse().map_err(|_| format!("bad parameter {s:?}"))?;
        Ok((v, false))
    }
}

/// Parse the canonical family text forms, including the named presets
/// DiFrancesco, Warmup, D2, D3, MS1.
pub fn parse_family_spec(text: &str) -> Result<FamilySpec, String> {
    let t = text.trim();
    match t {
        "DiFrancesco" => return Ok(FamilySpec::difrancesco()),
        "Warmup" | "Warmup(a,x)" => return Ok(FamilySpec::warmup()),
        "D2" => return Ok(FamilySpec::d_x(1, 0, 1, 1)),
        "D3" => return Ok(FamilySpec::d_x(0, 0, 0, 0)),
        "MS1" => return Ok(FamilySpec::f_x(3, 0, 3, 3)),
        _ => {}
    }
    let (letter, rest) = t.split_at(1);
    let maker: fn(i64, i64, i64, i64) -> FamilySpec = match letter {
        "D" => FamilySpec::d,
        "E" => FamilySpec::e,
        "F" => FamilySpec::f,
        "G" => FamilySpec::g,
        _ => return Err(format!("unknown family {t:?}")),
    };
    let inner = rest
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| format!("expected {letter}[a,b,c,d], got {t:?}"))?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected 4 parameters in {t:?}"));
    }
    let (alpha, xa) = parse_offset(parts[0])?;
    let (beta, xb) = parse_offset(parts[1])?;
    if xa || xb {
        return Err("x is only allowed in the last two parameters".into());
    }
    let (gamma, xg) = parse_offset(parts[2])?;
    let (delta, xd) = parse_offset(parts[3])?;
    let mut spec = maker(alpha, beta, gamma, delta);
    if xg != xd {
        return Err("x must appear in both or neither of the last two parameters".into());
    }
    if xg {
        spec.x_mode = XMode::Symbolic;
    }
    Ok(spec)
}

fn rat_pow(b: &Rat, e: i64) -> Rat {
    let mut v = <Rat as One>::one();
    for _ in 0..e.unsigned_abs() {
        v *= b;
    }
    if e >= 0 {
        v
    } else {
        <Rat as One>::one() / v
    }
}

fn binomial_poly_ext(top: &Poly, p: i64) -> Poly {
    if p >= 0 {
        return binomial_poly(top, p);
    }
    match top.degree() {
        None => Poly::zero(),
        Some(0) => Poly::constant(binomial_ext(&top.coeff(0), p)),
        Some(_) => Poly::zero(),
    }
}

fn binomial_mpoly_ext(top: &MPoly, p: i64) -> MPoly {
    if p >= 0 {
        let mut num = MPoly::one();
        for k in 0..p {
            num = num.mul(&top.sub(&MPoly::constant(rat(k))));
        }
        let fact = Rat::from_integer(crate::exact::factorial(p as u64));
        return num.scale(&(<Rat as One>::one() / fact));
    }
    match top.as_constant() {
        Some(c) => MPoly::constant(binomial_ext(&c, p)),
        None => MPoly::zero(),
    }
}

/// Materialize the n x n matrix of a family spec. Ring selection: numeric
/// entries when x is absent or fixed and the base is numeric, univariate
/// polynomials in x for a symbolic x over a numeric base, multivariate
/// polynomials when the base is the symbol a.
pub fn build_family(spec: &FamilySpec, n: usize) -> AnyMatrix {
    assert!(n >= 1, "matrix dimension must be positive");
    let symbolic_x = spec.x_mode == XMode::Symbolic;
    match (spec.base, symbolic_x) {
        (BaseKind::Num(b), false) => {
            let x0 = match &spec.x_mode {
                XMode::None => <Rat as Zero>::zero(),
                XMode::Numeric(r) => r.clone(),
                XMode::Symbolic => unreachable!(),
            };
            let b = rat(b);
            AnyMatrix::Num(Matrix::build(n, |i, j| {
                let (i, j) = (i as i64, j as i64);
                let p = spec.m * j + spec.alpha;
                let top1 = &x0 + rat(i + spec.m * j + spec.gamma);
                let top2 = &x0 + rat(spec.eps2 as i64 * i + spec.m * j + spec.delta);
                let t1 = rat_pow(&b, i + spec.beta) * binomial_ext(&top1, p);
                let t2 = rat(spec.sign as i64) * binomial_ext(&top2, p);
                t1 + t2
            }))
        }
        (BaseKind::Num(b), true) => {
            let b = rat(b);
            AnyMatrix::PolyX(Matrix::build(n, |i, j| {
                let (i, j) = (i as i64, j as i64);
                let p = spec.m * j + spec.alpha;
                let top1 = Poly::from_coeffs(vec![
                    rat(i + spec.m * j + spec.gamma),
                    <Rat as One>::one(),
                ]);
                let top2 = Poly::from_coeffs(vec![
                    rat(spec.eps2 as i64 * i + spec.m * j + spec.delta),
                    <Rat as One>::one(),
                ]);
                let t1 = binomial_poly_ext(&top1, p).scale(&rat_pow(&b, i + spec.beta));
                let t2 = binomial_poly_ext(&top2, p).scale(&rat(spec.sign as i64));
                t1.add(&t2)
            }))
        }
        (BaseKind::Symbolic, _) => {
            let x_term = |c: i64| -> MPoly {
                match &spec.x_mode {
                    XMode::None => MPoly::constant(rat(c)),
                    XMode::Numeric(r) => MPoly::constant(r + rat(c)),
                    XMode::Symbolic => MPoly::var(0).add(&MPoly::constant(rat(c))),
                }
            };
            AnyMatrix::Multi(Matrix::build(n, |i, j| {
                let (i, j) = (i as i64, j as i64);
                let p = spec.m * j + spec.alpha;
                let top1 = x_term(i + spec.m * j + spec.gamma);
                let top2 = x_term(spec.eps2 as i64 * i + spec.m * j + spec.delta);
                let e = i + spec.beta;
                let apow = MPoly::monomial(
                    [0, i32::try_from(e).expect("exponent fits"), 0],
                    <Rat as One>::one(),
                );
                let t1 = apow.mul(&binomial_mpoly_ext(&top1, p));
                let t2 = binomial_mpoly_ext(&top2, p).scale(&rat(spec.sign as i64));
                t1.add(&t2)
            }))
        }
    }
}

// ---------------------------------------------------------------------------
// Delannoy numbers and matrices
// ---------------------------------------------------------------------------

static DELANNOY: Lazy<Mutex<Vec<Vec<BigInt>>>> = Lazy::new(|| Mutex::new(vec![]));

/// Central-free Delannoy number D(i,j): lattice paths from (0,0) to (i,j)
/// with unit right, up, and diagonal steps. Zero off the first quadrant.
pub fn delannoy(i: i64, j: i64) -> BigInt {
    if i < 0 || j < 0 {
        return BigInt::zero();
    }
    let (i, j) = (i as usize, j as usize);
    let mut table = DELANNOY.lock().unwrap();
    let rows = table.len();
    let cols = if rows == 0 { 0 } else { table[0].len() };
    if i >= rows || j >= cols {
        let nr = rows.max(i + 1).max(8);
        let nc = cols.max(j + 1).max(8);
        let mut t = vec![vec![BigInt::zero(); nc]; nr];
        for r in 0..nr {
            t[r][0] = BigInt::one();
        }
        for c in 0..nc {
            t[0][c] = BigInt::one();
        }
        for r in 1..nr {
            for c in 1..nc {
                t[r][c] = &t[r - 1][c] + &t[r][c - 1] + &t[r - 1][c - 1];
            }
        }
        *table = t;
    }
    table[i][j].clone()
}

/// k x k matrix with entry D(2j-i, i+n-k-1) for i, j running 1..k.
pub fn build_delannoy_matrix(k: usize, n: i64) -> Matrix<Rat> {
    assert!(k >= 1, "k must be positive");
    Matrix::build(k, |i0, j0| {
        let i = i0 as i64 + 1;
        let j = j0 as i64 + 1;
        Rat::from_integer(delannoy(2 * j - i, i + n - k as i64 - 1))
    })
}

// ---------------------------------------------------------------------------
// q-deformed matrix
// ---------------------------------------------------------------------------

/// Symbolic q-matrix with the per-column factor 1/(q;q)_j pulled out:
/// entry(i,j) = a^i * prod_{k<j}(1 - x q^(1+i+k)) + prod_{k<j}(1 - x q^(1-i+k)).
/// Returns the matrix and the extracted factor prod_j (q;q)_j, so that
/// det(original) = det(returned) / factor. Entries are Laurent in q
/// (exponents 1-i+k go negative) and polynomial in a and x.
pub fn build_q_matrix(n: usize) -> (Matrix<MPoly>, MPoly) {
    assert!(n >= 1, "matrix dimension must be positive");
    let x = MPoly::var(0);
    let qpoch = |start: i64, j: usize| -> MPoly {
        // prod_{k<j} (1 - x q^(start+k))
        let mut acc = MPoly::one();
        for k in 0..j as i64 {
            let e = i32::try_from(start + k).expect("exponent fits");
            let term = MPoly::one().sub(&x.mul(&MPoly::monomial([0, 0, e], <Rat as One>::one())));
            acc = acc.mul(&term);
        }
        acc
    };
    let m = Matrix::build(n, |i, j| {
        let apow = MPoly::monomial([0, i as i32, 0], <Rat as One>::one());
        let t1 = apow.mul(&qpoch(1 + i as i64, j));
        let t2 = qpoch(1 - i as i64, j);
        t1.add(&t2)
    });
    let mut factor = MPoly::one();
    for j in 0..n {
        // (q;q)_j = prod_{k=1..j} (1 - q^k)
        for k in 1..=j as i64 {
            let e = i32::try_from(k).expect("exponent fits");
            factor = factor.mul(
                &MPoly::one().sub(&MPoly::monomial([0, 0, e], <Rat as One>::one())),
            );
        }
    }
    (m, factor)
}

/// Numeric q-matrix at exact rational points, denominators applied
/// directly. Errors when q = 0 or some (q;q)_j vanishes at the point.
pub fn build_q_matrix_numeric(
    n: usize,
    x0: &Rat,
    a0: &Rat,
    q0: &Rat,
) -> Result<Matrix<Rat>, String> {
    assert!(n >= 1, "matrix dimension must be positive");
    if Zero::is_zero(q0) {
        return Err("q must be nonzero".into());
    }
    // (q;q)_j for j < n
    let mut qq = vec![<Rat as One>::one()];
    let mut qk = <Rat as One>::one();
    for k in 1..n as i64 {
        qk *= q0;
        let next = qq.last().unwrap() * (<Rat as One>::one() - &qk);
        if Zero::is_zero(&next) {
            return Err(format!("(q;q)_{k} vanishes at q = {q0}"));
        }
        qq.push(next);
    }
    let qpow = |e: i64| rat_pow(q0, e);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n as i64 {
        let mut row = Vec::with_capacity(n);
        for j in 0..n as i64 {
            let mut p1 = <Rat as One>::one();
            let mut p2 = <Rat as One>::one();
            for k in 0..j {
                p1 *= <Rat as One>::one() - x0 * qpow(1 + i + k);
                p2 *= <Rat as One>::one() - x0 * qpow(1 - i + k);
            }
            let v = (rat_pow(a0, i) * p1 + p2) / &qq[j as usize];
            row.push(v);
        }
        rows.push(row);
    }
    Ok(Matrix {
        n,
        entries: rows,
    })
}

/// Evaluate a symbolic family matrix at a rational x (PolyX ring only).
pub fn eval_poly_matrix(m: &Matrix<Poly>, x: &Rat) -> Matrix<Rat> {
    m.map(|p| p.eval(x))
}

/// Evaluate a multivariate matrix at rational (x, a, q) values.
pub fn eval_multi_matrix(m: &Matrix<MPoly>, vals: &[Rat; 3]) -> Result<Matrix<Rat>, String> {
    let mut rows = Vec::with_capacity(m.n);
    for row in &m.entries {
        let mut out = Vec::with_capacity(m.n);
        for e in row {
            out.push(e.eval(vals)?);
        }
        rows.push(out);
    }
    Ok(Matrix {
        n: m.n,
        entries: rows,
    })
}

/// Parse a rational x value for use in specs ("7/2", "-1", "0").
pub fn parse_x(s: &str) -> Result<Rat, String> {
    parse_rat(s)
}

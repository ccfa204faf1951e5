//! Polynomial layer: dense univariate polynomials over Rat, sparse
//! multivariate polynomials in up to three variable slots (canonically
//! printed as x, a, q), Laurent polynomials in one variable, and fractions
//! of multivariate polynomials.
//!
//! MPoly tolerates negative exponents, so Laurent objects in q can ride the
//! same arithmetic. Fractions are reduced by content only; equality is by
//! cross-multiplication. No multivariate gcd anywhere.

use num::{BigInt, Integer, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::exact::{binom_int, Rat};

/// Common exact-ring interface used by the determinant engine.
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exact division; error when the divisor does not divide exactly.
    fn exact_div(&self, other: &Self) -> Result<Self, String>;
}

impl Ring for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn exact_div(&self, other: &Self) -> Result<Self, String> {
        if Zero::is_zero(other) {
            return Err("division by zero".into());
        }
        Ok(self / other)
    }
}

/// gcd of two rationals: gcd of numerators over lcm of denominators.
/// gcd(0, b) = |b|.
pub fn rat_gcd(a: &Rat, b: &Rat) -> Rat {
    if Zero::is_zero(a) {
        return b.abs();
    }
    if Zero::is_zero(b) {
        return a.abs();
    }
    let num = a.numer().gcd(b.numer());
    let den = a.denom().lcm(b.denom());
    Rat::new(num, den)
}

/// Content (positive rational) of a nonempty coefficient collection.
pub fn rat_content<'a, I: IntoIterator<Item = &'a Rat>>(coeffs: I) -> Rat {
    let mut g = <Rat as Zero>::zero();
    for c in coeffs {
        g = rat_gcd(&g, c);
        if g == <Rat as One>::one() {
            break;
        }
    }
    g
}

fn fmt_coeff(out: &mut String, c: &Rat, first: bool, has_vars: bool) {
    let neg = c.is_negative();
    if first {
        if neg {
            out.push('-');
        }
    } else if neg {
        out.push_str(" - ");
    } else {
        out.push_str(" + ");
    }
    let a = c.abs();
    if !has_vars || a != <Rat as One>::one() {
        if a.denom().is_one() {
            let _ = write!(out, "{}", a.numer());
        } else {
            let _ = write!(out, "{}/{}", a.numer(), a.denom());
        }
        if has_vars {
            out.push('*');
        }
    }
}

// ---------------------------------------------------------------------------
// Dense univariate polynomials
// ---------------------------------------------------------------------------

/// Dense univariate polynomial over Rat. Trailing zeros are trimmed, so the
/// coefficient list of a nonzero polynomial ends at its true degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(<Rat as One>::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Poly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// The monomial x.
    pub fn var() -> Self {
        Poly {
            coeffs: vec![<Rat as Zero>::zero(), <Rat as One>::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if Zero::is_zero(c)) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(<Rat as Zero>::zero)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(<Rat as Zero>::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - other.coeff(k));
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        if Zero::is_zero(s) {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![<Rat as Zero>::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, e: u64) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut v = <Rat as Zero>::zero();
        for c in self.coeffs.iter().rev() {
            v = v * x + c;
        }
        v
    }

    /// Quotient and remainder of self / other.
    pub fn div_rem(&self, other: &Poly) -> Result<(Poly, Poly), String> {
        if other.is_zero() {
            return Err("division by zero polynomial".into());
        }
        let mut rem = self.clone();
        let d = other.degree().unwrap();
        let lead = other.leading();
        let mut q = vec![
            <Rat as Zero>::zero();
            self.coeffs.len().saturating_sub(other.coeffs.len()) + 1
        ];
        while let Some(rd) = rem.degree() {
            if rd < d {
                break;
            }
            let c = rem.leading() / &lead;
            let shift = rd - d;
            q[shift] = c.clone();
            let mut sub = vec![<Rat as Zero>::zero(); shift];
            sub.extend(other.coeffs.iter().map(|b| b * &c));
            rem = rem.sub(&Poly::from_coeffs(sub));
        }
        Ok((Poly::from_coeffs(q), rem))
    }

    pub fn exact_div(&self, other: &Poly) -> Result<Poly, String> {
        let (q, r) = self.div_rem(other)?;
        if !r.is_zero() {
            return Err(format!(
                "polynomial division leaves remainder {}",
                r.to_text("x")
            ));
        }
        Ok(q)
    }

    /// Content and primitive part: p = c * q with q having coprime integer
    /// coefficients and positive leading coefficient.
    pub fn content_and_primitive(&self) -> Result<(Rat, Poly), String> {
        if self.is_zero() {
            return Err("zero polynomial has no primitive part".into());
        }
        let mut c = rat_content(self.coeffs.iter());
        if self.leading().is_negative() {
            c = -c;
        }
        Ok((c.clone(), self.scale(&(<Rat as One>::one() / c))))
    }

    /// Canonical text: descending exponents, explicit signs, p/q rationals.
    pub fn to_text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if Zero::is_zero(c) {
                continue;
            }
            fmt_coeff(&mut out, c, first, k > 0);
            if k >= 1 {
                out.push_str(var);
                if k > 1 {
                    let _ = write!(out, "^{k}");
                }
            }
            first = false;
        }
        out
    }

    /// Embed into MPoly using variable slot `slot`.
    pub fn to_mpoly(&self, slot: usize) -> MPoly {
        let mut m = MPoly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !Zero::is_zero(c) {
                let mut e = [0i32; 3];
                e[slot] = k as i32;
                m.terms.insert(e, c.clone());
            }
        }
        m
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Poly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Poly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Poly::mul(self, other)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn exact_div(&self, other: &Self) -> Result<Self, String> {
        Poly::exact_div(self, other)
    }
}

// ---------------------------------------------------------------------------
// Sparse multivariate polynomials (three variable slots; Laurent tolerated)
// ---------------------------------------------------------------------------

/// Names used for the three MPoly slots in canonical serialization.
pub const MPOLY_VARS: [&str; 3] = ["x", "a", "q"];

/// Sparse polynomial in up to three variables with Rat coefficients.
/// Exponents may be negative (Laurent terms), which the q-objects use.
/// Terms with zero coefficient are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    pub terms: BTreeMap<[i32; 3], Rat>,
}

/// Graded lexicographic order on exponent vectors: total degree first.
fn grlex(a: &[i32; 3], b: &[i32; 3]) -> std::cmp::Ordering {
    let ta: i64 = a.iter().map(|&e| e as i64).sum();
    let tb: i64 = b.iter().map(|&e| e as i64).sum();
    ta.cmp(&tb).then_with(|| a.cmp(b))
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(<Rat as One>::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut m = MPoly::zero();
        if !Zero::is_zero(&c) {
            m.terms.insert([0, 0, 0], c);
        }
        m
    }

    /// The variable in slot `slot` (0 = x, 1 = a, 2 = q).
    pub fn var(slot: usize) -> Self {
        MPoly::monomial({
            let mut e = [0i32; 3];
            e[slot] = 1;
            e
        }, <Rat as One>::one())
    }

    pub fn monomial(exps: [i32; 3], c: Rat) -> Self {
        let mut m = MPoly::zero();
        if !Zero::is_zero(&c) {
            m.terms.insert(exps, c);
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&[0, 0, 0]))
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(<Rat as Zero>::zero());
        }
        if self.is_constant() {
            return self.terms.get(&[0, 0, 0]).cloned();
        }
        None
    }

    fn insert(&mut self, e: [i32; 3], c: Rat) {
        if Zero::is_zero(&c) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if Zero::is_zero(o.get()) {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(*e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> MPoly {
        if Zero::is_zero(s) {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.insert(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u64) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Leading term under graded lex.
    fn lead(&self) -> Option<([i32; 3], Rat)> {
        self.terms
            .iter()
            .max_by(|a, b| grlex(a.0, b.0))
            .map(|(e, c)| (*e, c.clone()))
    }

    /// Minimum exponent per slot (0 for the zero polynomial).
    pub fn min_exps(&self) -> [i32; 3] {
        let mut m = [i32::MAX; 3];
        for e in self.terms.keys() {
            for k in 0..3 {
                m[k] = m[k].min(e[k]);
            }
        }
        if self.terms.is_empty() {
            [0, 0, 0]
        } else {
            m
        }
    }

    /// Multiply by the monomial with exponent vector `shift`.
    pub fn mono_shift(&self, shift: [i32; 3]) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ([e[0] + shift[0], e[1] + shift[1], e[2] + shift[2]], c.clone()))
                .collect(),
        }
    }

    /// Exact division. Both operands may carry negative exponents; units
    /// (monomials) are divided out first, then ordinary multivariate
    /// division with a single divisor runs under graded lex.
    pub fn exact_div(&self, other: &MPoly) -> Result<MPoly, String> {
        if other.is_zero() {
            return Err("division by zero polynomial".into());
        }
        if self.is_zero() {
            return Ok(MPoly::zero());
        }
        let sp = self.min_exps();
        let sd = other.min_exps();
        let p = self.mono_shift([-sp[0], -sp[1], -sp[2]]);
        let d = other.mono_shift([-sd[0], -sd[1], -sd[2]]);
        let (de, dc) = d.lead().unwrap();
        let mut rem = p;
        let mut q = MPoly::zero();
        while let Some((re, rc)) = rem.lead() {
            let te = [re[0] - de[0], re[1] - de[1], re[2] - de[2]];
            if te.iter().any(|&e| e < 0) {
                return Err("not exactly divisible".into());
            }
            let t = MPoly::monomial(te, rc / &dc);
            q = q.add(&t);
            rem = rem.sub(&t.mul(&d));
        }
        Ok(q.mono_shift([sp[0] - sd[0], sp[1] - sd[1], sp[2] - sd[2]]))
    }

    /// Substitute a Rat value for one variable slot. Negative exponents
    /// reject a zero value.
    pub fn subst(&self, slot: usize, val: &Rat) -> Result<MPoly, String> {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let k = e[slot];
            let mut coeff = c.clone();
            if k != 0 {
                if Zero::is_zero(val) {
                    if k < 0 {
                        return Err("substituting 0 into a negative power".into());
                    }
                    continue;
                }
                let mut f = <Rat as One>::one();
                for _ in 0..k.unsigned_abs() {
                    f *= val;
                }
                if k > 0 {
                    coeff *= f;
                } else {
                    coeff /= f;
                }
            }
            let mut e2 = *e;
            e2[slot] = 0;
            out.insert(e2, coeff);
        }
        Ok(out)
    }

    /// Substitute values for all three slots.
    pub fn eval(&self, vals: &[Rat; 3]) -> Result<Rat, String> {
        let m = self
            .subst(0, &vals[0])?
            .subst(1, &vals[1])?
            .subst(2, &vals[2])?;
        Ok(m.as_constant().expect("all variables substituted"))
    }

    pub fn degree_in(&self, slot: usize) -> i32 {
        self.terms.keys().map(|e| e[slot]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).sum())
            .max()
            .unwrap_or(0)
    }

    /// Content and primitive part, sign normalized so the graded-lex leading
    /// coefficient of the primitive part is positive.
    pub fn content_and_primitive(&self) -> Result<(Rat, MPoly), String> {
        if self.is_zero() {
            return Err("zero polynomial has no primitive part".into());
        }
        let mut c = rat_content(self.terms.values());
        if self.lead().unwrap().1.is_negative() {
            c = -c;
        }
        Ok((c.clone(), self.scale(&(<Rat as One>::one() / c))))
    }

    /// View as univariate in `slot` when no other slot is used.
    pub fn to_poly(&self, slot: usize) -> Result<Poly, String> {
        let mut coeffs: Vec<Rat> = vec![];
        for (e, c) in &self.terms {
            for k in 0..3 {
                if k != slot && e[k] != 0 {
                    return Err(format!("term uses variable slot {k}"));
                }
            }
            let d = e[slot];
            if d < 0 {
                return Err("negative exponent".into());
            }
            let d = d as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, <Rat as Zero>::zero());
            }
            coeffs[d] = c.clone();
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    /// Canonical text with custom slot names: graded-lex descending terms,
    /// explicit signs, p/q rationals.
    pub fn to_text_with(&self, vars: &[&str; 3]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&[i32; 3]> = self.terms.keys().collect();
        keys.sort_by(|a, b| grlex(b, a));
        let mut out = String::new();
        let mut first = true;
        for e in keys {
            let c = &self.terms[e];
            let has_vars = e.iter().any(|&k| k != 0);
            fmt_coeff(&mut out, c, first, has_vars);
            let mut started = false;
            for (k, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                if started {
                    out.push('*');
                }
                out.push_str(vars[k]);
                if exp != 1 {
                    let _ = write!(out, "^{exp}");
                }
                started = true;
            }
            first = false;
        }
        out
    }

    pub fn to_text(&self) -> String {
        self.to_text_with(&MPOLY_VARS)
    }
}

impl Ring for MPoly {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn one() -> Self {
        MPoly::one()
    }
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        MPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        MPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        MPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        MPoly::neg(self)
    }
    fn exact_div(&self, other: &Self) -> Result<Self, String> {
        MPoly::exact_div(self, other)
    }
}

// ---------------------------------------------------------------------------
// Laurent polynomials in one variable
// ---------------------------------------------------------------------------

/// Laurent polynomial in a single variable with Rat coefficients.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    pub terms: BTreeMap<i64, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(<Rat as One>::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = LaurentPoly::zero();
        if !Zero::is_zero(&c) {
            p.terms.insert(0, c);
        }
        p
    }

    pub fn monomial(exp: i64, c: Rat) -> Self {
        let mut p = LaurentPoly::zero();
        if !Zero::is_zero(&c) {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, e: i64, c: Rat) {
        if Zero::is_zero(&c) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if Zero::is_zero(o.get()) {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(*e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> LaurentPoly {
        if Zero::is_zero(s) {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.insert(ea + eb, ca * cb);
            }
        }
        out
    }

    /// Multiply by var^k.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn coeff(&self, e: i64) -> Rat {
        self.terms.get(&e).cloned().unwrap_or_else(<Rat as Zero>::zero)
    }

    pub fn min_exp(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(0)
    }

    pub fn max_exp(&self) -> i64 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    /// Evaluate at a Rat point; zero rejects negative exponents.
    pub fn eval(&self, v: &Rat) -> Result<Rat, String> {
        let mut total = <Rat as Zero>::zero();
        for (e, c) in &self.terms {
            if *e < 0 && Zero::is_zero(v) {
                return Err("evaluating a negative power at 0".into());
            }
            let mut f = <Rat as One>::one();
            for _ in 0..e.unsigned_abs() {
                f *= v;
            }
            if *e >= 0 {
                total += c * f;
            } else {
                total += c / f;
            }
        }
        Ok(total)
    }

    /// Embed into MPoly using variable slot `slot` (exponents must fit i32).
    pub fn to_mpoly(&self, slot: usize) -> MPoly {
        let mut m = MPoly::zero();
        for (e, c) in &self.terms {
            let mut ev = [0i32; 3];
            ev[slot] = i32::try_from(*e).expect("Laurent exponent fits i32");
            m.terms.insert(ev, c.clone());
        }
        m
    }

    pub fn from_mpoly(m: &MPoly, slot: usize) -> Result<LaurentPoly, String> {
        let mut p = LaurentPoly::zero();
        for (e, c) in &m.terms {
            for k in 0..3 {
                if k != slot && e[k] != 0 {
                    return Err(format!("term uses variable slot {k}"));
                }
            }
            p.terms.insert(e[slot] as i64, c.clone());
        }
        Ok(p)
    }

    /// Canonical text: descending exponents, explicit signs, p/q rationals.
    pub fn to_text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            fmt_coeff(&mut out, c, first, *e != 0);
            if *e != 0 {
                out.push_str(var);
                if *e != 1 {
                    let _ = write!(out, "^{e}");
                }
            }
            first = false;
        }
        out
    }
}

/// Expansion of (1 + sign*w)^exponent as a Laurent polynomial in w.
pub fn laurent_binomial_power(sign: i8, exponent: u64) -> LaurentPoly {
    assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
    let mut p = LaurentPoly::zero();
    for k in 0..=exponent {
        let mut c = Rat::from_integer(binom_int(exponent as i64, k as i64));
        if sign < 0 && k % 2 == 1 {
            c = -c;
        }
        p.insert(k as i64, c);
    }
    p
}

// ---------------------------------------------------------------------------
// Fractions of multivariate polynomials
// ---------------------------------------------------------------------------

/// Fraction of MPolys. Reduced by content only (no multivariate gcd); the
/// denominator's graded-lex leading coefficient is kept positive. Equality
/// is decided by cross-multiplication.
#[derive(Debug, Clone)]
pub struct RatFunc {
    pub num: MPoly,
    pub den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<RatFunc, String> {
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num: MPoly::zero(),
                den: MPoly::one(),
            });
        }
        let (cn, pn) = num.content_and_primitive()?;
        let (cd, pd) = den.content_and_primitive()?;
        let s = cn / cd;
        Ok(RatFunc {
            num: pn.scale(&s),
            den: pd,
        })
    }

    pub fn zero() -> Self {
        RatFunc {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc {
            num: MPoly::one(),
            den: MPoly::one(),
        }
    }

    pub fn from_mpoly(m: MPoly) -> Self {
        RatFunc {
            num: m,
            den: MPoly::one(),
        }
    }

    pub fn from_rat(r: Rat) -> Self {
        RatFunc::from_mpoly(MPoly::constant(r))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("nonzero denominators")
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("nonzero denominators")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominators")
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, String> {
        if other.is_zero() {
            return Err("division by zero fraction".into());
        }
        RatFunc::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn eval(&self, vals: &[Rat; 3]) -> Result<Rat, String> {
        let d = self.den.eval(vals)?;
        if Zero::is_zero(&d) {
            return Err("denominator vanishes at the point".into());
        }
        Ok(self.num.eval(vals)? / d)
    }

    pub fn to_text(&self) -> String {
        if self.den == MPoly::one() {
            self.num.to_text()
        } else {
            format!("({})/({})", self.num.to_text(), self.den.to_text())
        }
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Ring for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        RatFunc::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RatFunc::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RatFunc::mul(self, other)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn exact_div(&self, other: &Self) -> Result<Self, String> {
        RatFunc::div(self, other)
    }
}

/// Convenience: BigInt -> Rat.
pub fn int_rat(v: BigInt) -> Rat {
    Rat::from_integer(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::exact::ratio;

    #[test]
    fn poly_mul_divides_back() {
        let p = Poly::from_coeffs(vec![rat(1), rat(1)]); // x+1
        let q = Poly::from_coeffs(vec![rat(-1), rat(1)]); // x-1
        let prod = p.mul(&q);
        assert_eq!(prod, Poly::from_coeffs(vec![rat(-1), rat(0), rat(1)]));
        assert_eq!(prod.exact_div(&p).unwrap(), q);
    }

    #[test]
    fn content_examples() {
        let p = Poly::from_coeffs(vec![rat(4), rat(2)]);
        let (c, q) = p.content_and_primitive().unwrap();
        assert_eq!(c, rat(2));
        assert_eq!(q, Poly::from_coeffs(vec![rat(2), rat(1)]));
        let p = Poly::from_coeffs(vec![rat(0), ratio(3, 2)]);
        let (c, q) = p.content_and_primitive().unwrap();
        assert_eq!(c, ratio(3, 2));
        assert_eq!(q, Poly::var());
    }

    #[test]
    fn mpoly_laurent_division() {
        // (q^-1 + 2 + q) / (q^-1 + 1) = 1 + q  (since q^-1+2+q = (q^-1+1)(1+q))
        let mut p = MPoly::zero();
        p.insert([0, 0, -1], rat(1));
        p.insert([0, 0, 0], rat(2));
        p.insert([0, 0, 1], rat(1));
        let mut d = MPoly::zero();
        d.insert([0, 0, -1], rat(1));
        d.insert([0, 0, 0], rat(1));
        let q = p.exact_div(&d).unwrap();
        let mut expect = MPoly::zero();
        expect.insert([0, 0, 0], rat(1));
        expect.insert([0, 0, 1], rat(1));
        assert_eq!(q, expect);
    }

    #[test]
    fn mpoly_division_with_unequal_unit_shifts() {
        // x^2 (1+q) / x = x (1+q): the unit shifts of numerator and divisor
        // differ, so the quotient must carry the difference forward
        let mut p = MPoly::zero();
        p.insert([2, 0, 0], rat(1));
        p.insert([2, 0, 1], rat(1));
        let d = MPoly::monomial([1, 0, 0], rat(1));
        let mut expect = MPoly::zero();
        expect.insert([1, 0, 0], rat(1));
        expect.insert([1, 0, 1], rat(1));
        assert_eq!(p.exact_div(&d).unwrap(), expect);
        // and round trip with a negative-exponent divisor
        let d2 = MPoly::monomial([0, 0, -2], rat(3));
        let prod = p.mul(&d2);
        assert_eq!(prod.exact_div(&d2).unwrap(), p);
        assert_eq!(prod.exact_div(&p).unwrap(), d2);
    }

    #[test]
    fn laurent_power_text() {
        let p = laurent_binomial_power(-1, 2);
        assert_eq!(p.to_text("w"), "w^2 - 2*w + 1");
        assert_eq!(laurent_binomial_power(1, 0), LaurentPoly::one());
    }

    #[test]
    fn ratfunc_cross_eq() {
        // (x^2-1)/(x-1) == (x+1)/1
        let x = MPoly::var(0);
        let num = x.mul(&x).sub(&MPoly::one());
        let den = x.sub(&MPoly::one());
        let f = RatFunc::new(num, den).unwrap();
        let g = RatFunc::from_mpoly(x.add(&MPoly::one()));
        assert_eq!(f, g);
    }
}

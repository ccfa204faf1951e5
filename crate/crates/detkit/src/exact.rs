//! Scalar kernel: exact rationals, factored scalars with fractional prime
//! exponents and a sqrt(pi) tracker, and the combinatorial primitives
//! (factorial, binomial, Pochhammer, Gamma at integer/half-integer points,
//! Gamma ratios with integer difference, q-Pochhammer).

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, Zero};
use once_cell::sync::Lazy;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use crate::poly::{MPoly, Poly};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (maintained by the underlying representation).
pub type Rat = BigRational;

/// Shorthand constructor for an integer value.
pub fn rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Shorthand constructor for a fraction p/q.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parse a rational from "p", "-p", or "p/q" decimal notation.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().map_err(|_| format!("bad numerator {p:?}"))?;
        let den: BigInt = q.trim().parse().map_err(|_| format!("bad denominator {q:?}"))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(Rat::new(num, den))
    } else {
        let num: BigInt = s.parse().map_err(|_| format!("bad rational {s:?}"))?;
        Ok(Rat::from_integer(num))
    }
}

/// True if r is an integer.
pub fn is_int(r: &Rat) -> bool {
    r.denom().is_one()
}

/// The integer value of r, when r is an integer small enough for i64.
pub fn as_i64(r: &Rat) -> Option<i64> {
    if !is_int(r) {
        return None;
    }
    i64::try_from(r.numer().clone()).ok()
}

static FACTORIALS: Lazy<Mutex<Vec<BigInt>>> = Lazy::new(|| Mutex::new(vec![BigInt::one()]));

/// n! with a grow-on-demand shared table.
pub fn factorial(n: u64) -> BigInt {
    let mut t = FACTORIALS.lock().unwrap();
    while (t.len() as u64) <= n {
        let next = t.last().unwrap() * BigInt::from(t.len());
        t.push(next);
    }
    t[n as usize].clone()
}

/// Binomial coefficient with arbitrary integer upper argument and p >= 0;
/// returns 0 for p < 0. This is the plain falling-factorial convention.
pub fn binom_int(top: i64, p: i64) -> BigInt {
    if p < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    for k in 0..p {
        num *= BigInt::from(top - k);
    }
    num / factorial(p as u64)
}

/// Binomial coefficient for integer arguments under the limit convention
/// used by the matrix entries: for p < 0 the value is nonzero exactly when
/// p <= top <= -1, where it equals (-1)^(top-p) * C(-p-1, top-p).
/// (Both arguments negative: the ratio of Gamma factors has a finite limit.)
pub fn binom_int_ext(top: i64, p: i64) -> BigInt {
    if p >= 0 {
        return binom_int(top, p);
    }
    if p <= top && top <= -1 {
        let v = binom_int(-p - 1, top - p);
        if (top - p) % 2 != 0 {
            -v
        } else {
            v
        }
    } else {
        BigInt::zero()
    }
}

/// binomial(alpha, p) over rationals: falling factorial over p! for
/// p >= 0, and 0 for p < 0. Total function.
pub fn binomial(alpha: &Rat, p: i64) -> Rat {
    if p < 0 {
        return Rat::zero();
    }
    let mut num = Rat::one();
    for k in 0..p {
        num *= alpha - rat(k);
    }
    num / Rat::from_integer(factorial(p as u64))
}

/// binomial over rationals under the limit convention: extends `binomial`
/// to negative p when alpha is an integer in [p, -1]; 0 otherwise.
pub fn binomial_ext(alpha: &Rat, p: i64) -> Rat {
    if p >= 0 {
        return binomial(alpha, p);
    }
    if is_int(alpha) {
        if let Some(m) = as_i64(alpha) {
            return Rat::from_integer(binom_int_ext(m, p));
        }
    }
    Rat::zero()
}

/// binomial(alpha, p) where alpha is a univariate polynomial; degree of the
/// result is p * deg(alpha). For p < 0 the polynomial convention is 0
/// (a polynomial top is never a fixed negative integer).
pub fn binomial_poly(alpha: &Poly, p: i64) -> Poly {
    if p < 0 {
        return Poly::zero();
    }
    let mut num = Poly::one();
    for k in 0..p {
        num = num.mul(&alpha.sub(&Poly::constant(rat(k))));
    }
    num.scale(&(Rat::one() / Rat::from_integer(factorial(p as u64))))
}

/// Rising factorial (alpha)_p = alpha(alpha+1)...(alpha+p-1), p >= 0.
pub fn pochhammer(alpha: &Rat, p: u64) -> Rat {
    let mut r = Rat::one();
    for k in 0..p {
        r *= alpha + rat(k as i64);
    }
    r
}

/// Rising factorial with a polynomial base.
pub fn pochhammer_poly(alpha: &Poly, p: u64) -> Poly {
    let mut r = Poly::one();
    for k in 0..p {
        r = r.mul(&alpha.add(&Poly::constant(rat(k as i64))));
    }
    r
}

/// q-Pochhammer (alpha; q)_p = prod_{k<p} (1 - q^k alpha) over rationals.
pub fn qpochhammer(alpha: &Rat, q: &Rat, p: u64) -> Rat {
    let mut r = Rat::one();
    let mut qk = Rat::one();
    for _ in 0..p {
        r *= Rat::one() - &qk * alpha;
        qk *= q;
    }
    r
}

/// q-Pochhammer over multivariate polynomials (alpha and q may be any
/// MPoly values, e.g. monomials in the (x, a, q) variables).
pub fn qpochhammer_mpoly(alpha: &MPoly, q: &MPoly, p: u64) -> MPoly {
    let mut r = MPoly::one();
    let mut qk = MPoly::one();
    for _ in 0..p {
        r = r.mul(&MPoly::one().sub(&qk.mul(alpha)));
        qk = qk.mul(q);
    }
    r
}

/// Errors from the Gamma helpers and from FactoredScalar::finalize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    /// gamma_exact outside its domain (nonpositive, or not a half-integer).
    GammaDomain(String),
    /// gamma_ratio hit a pole or zero of the implied Pochhammer.
    GammaPole(String),
    /// finalize found a fractional prime exponent or leftover sqrt(pi).
    NotRational(String),
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::GammaDomain(s) => write!(f, "gamma domain error: {s}"),
            ExactError::GammaPole(s) => write!(f, "gamma pole: {s}"),
            ExactError::NotRational(s) => write!(f, "not a rational value: {s}"),
        }
    }
}

impl std::error::Error for ExactError {}

/// A scalar kept in the factored form
/// sign * residual * prod_p p^e_p * (sqrt pi)^sqrtPiExp,
/// where the exponents e_p are rationals. Fractional exponents are legal
/// in intermediate values (e.g. 5^(3/8) case factors); `finalize` insists
/// they have all combined to integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredScalar {
    pub sign: i8,
    pub prime_powers: BTreeMap<u64, Rat>,
    pub sqrt_pi_exp: i64,
    pub residual: Rat,
}

impl FactoredScalar {
    pub fn one() -> Self {
        FactoredScalar {
            sign: 1,
            prime_powers: BTreeMap::new(),
            sqrt_pi_exp: 0,
            residual: Rat::one(),
        }
    }

    pub fn zero() -> Self {
        FactoredScalar {
            sign: 0,
            prime_powers: BTreeMap::new(),
            sqrt_pi_exp: 0,
            residual: Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn from_rat(r: &Rat) -> Self {
        let mut s = FactoredScalar::one();
        s.mul_rat(r);
        s
    }

    /// Multiply by a plain rational (goes into the residual).
    pub fn mul_rat(&mut self, r: &Rat) {
        if self.sign == 0 {
            return;
        }
        if r.is_zero() {
            *self = FactoredScalar::zero();
            return;
        }
        if r.is_negative() {
            self.sign = -self.sign;
        }
        self.residual *= r.abs();
    }

    /// Multiply by p^e for a prime base p.
    pub fn mul_prime_pow(&mut self, p: u64, e: &Rat) {
        if self.sign == 0 {
            return;
        }
        let cur = self.prime_powers.entry(p).or_insert_with(Rat::zero);
        *cur += e;
        if cur.is_zero() {
            self.prime_powers.remove(&p);
        }
    }

    pub fn mul_sqrt_pi(&mut self, e: i64) {
        if self.sign != 0 {
            self.sqrt_pi_exp += e;
        }
    }

    pub fn mul(&mut self, other: &FactoredScalar) {
        if self.sign == 0 {
            return;
        }
        if other.sign == 0 {
            *self = FactoredScalar::zero();
            return;
        }
        self.sign *= other.sign;
        self.residual *= &other.residual;
        self.sqrt_pi_exp += other.sqrt_pi_exp;
        for (p, e) in &other.prime_powers {
            self.mul_prime_pow(*p, e);
        }
    }

    pub fn div(&mut self, other: &FactoredScalar) {
        assert!(other.sign != 0, "division by zero FactoredScalar");
        if self.sign == 0 {
            return;
        }
        self.sign *= other.sign;
        self.residual /= &other.residual;
        self.sqrt_pi_exp -= other.sqrt_pi_exp;
        for (p, e) in &other.prime_powers {
            self.mul_prime_pow(*p, &(-e.clone()));
        }
    }

    /// Collapse to a Rat. Errors when a prime exponent is non-integral or
    /// a sqrt(pi) factor survives.
    pub fn finalize(&self) -> Result<Rat, ExactError> {
        if self.sign == 0 {
            return Ok(Rat::zero());
        }
        if self.sqrt_pi_exp != 0 {
            return Err(ExactError::NotRational(format!(
                "sqrt(pi) exponent {} does not cancel",
                self.sqrt_pi_exp
            )));
        }
        let mut v = self.residual.clone();
        for (p, e) in &self.prime_powers {
            if !is_int(e) {
                return Err(ExactError::NotRational(format!(
                    "prime {p} has fractional exponent {e}"
                )));
            }
            let exp = as_i64(e).expect("exponent fits i64");
            let base = Rat::from_integer(BigInt::from(*p));
            if exp >= 0 {
                for _ in 0..exp {
                    v *= &base;
                }
            } else {
                for _ in 0..(-exp) {
                    v /= &base;
                }
            }
        }
        if self.sign < 0 {
            v = -v;
        }
        Ok(v)
    }
}

/// Gamma at a positive integer or half-integer argument.
/// Gamma(n) = (n-1)!, Gamma(m + 1/2) = (2m)! sqrt(pi) / (4^m m!).
pub fn gamma_exact(a: &Rat) -> Result<FactoredScalar, ExactError> {
    if !a.is_positive() {
        return Err(ExactError::GammaDomain(format!("{a} is not positive")));
    }
    let two_a = a * rat(2);
    if !is_int(&two_a) {
        return Err(ExactError::GammaDomain(format!(
            "{a} is neither an integer nor a half-integer"
        )));
    }
    let mut s = FactoredScalar::one();
    if is_int(a) {
        let n = as_i64(a).ok_or_else(|| ExactError::GammaDomain("argument too large".into()))?;
        s.mul_rat(&Rat::from_integer(factorial((n - 1) as u64)));
    } else {
        let m = as_i64(&(a - ratio(1, 2)))
            .ok_or_else(|| ExactError::GammaDomain("argument too large".into()))?;
        let m = m as u64;
        let num = Rat::from_integer(factorial(2 * m));
        let den = Rat::from_integer(BigInt::from(4u8).pow(m as u32) * factorial(m));
        s.mul_rat(&(num / den));
        s.mul_sqrt_pi(1);
    }
    Ok(s)
}

/// Gamma(b)/Gamma(a) for b - a an integer, as the exact Pochhammer value
/// (a)_{b-a} (or its reciprocal when b < a). Neither argument needs to be a
/// half-integer; only the difference matters.
pub fn gamma_ratio(a: &Rat, b: &Rat) -> Result<Rat, ExactError> {
    let d = b - a;
    if !is_int(&d) {
        return Err(ExactError::GammaDomain(format!(
            "Gamma({b})/Gamma({a}) has non-integer offset {d}"
        )));
    }
    let d = as_i64(&d).ok_or_else(|| ExactError::GammaDomain("offset too large".into()))?;
    if d >= 0 {
        Ok(pochhammer(a, d as u64))
    } else {
        let v = pochhammer(b, (-d) as u64);
        if v.is_zero() {
            return Err(ExactError::GammaPole(format!(
                "Gamma({b})/Gamma({a}) crosses a pole"
            )));
        }
        Ok(Rat::one() / v)
    }
}

/// Sign of a BigInt as -1/0/+1.
pub fn bigint_sign(v: &BigInt) -> i8 {
    match v.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(&rat(5), -2), Rat::zero());
        assert_eq!(binomial(&rat(-1), 3), rat(-1));
        assert_eq!(binomial(&rat(-1), 5), rat(-1));
        assert_eq!(binomial(&ratio(1, 2), 2), ratio(-1, 8));
    }

    #[test]
    fn extended_binomial_matches_limit_convention() {
        // C(-1, -23) = +1, C(-2, -25) = -24, zero outside p <= m <= -1
        assert_eq!(binom_int_ext(-1, -23), BigInt::from(1));
        assert_eq!(binom_int_ext(-2, -25), BigInt::from(-24));
        assert_eq!(binom_int_ext(-5, -3), BigInt::zero());
        assert_eq!(binom_int_ext(2, -1), BigInt::zero());
    }

    #[test]
    fn gamma_half_integer() {
        let g = gamma_exact(&ratio(5, 2)).unwrap();
        assert_eq!(g.sqrt_pi_exp, 1);
        assert_eq!(g.residual, ratio(3, 4));
    }

    #[test]
    fn gamma_ratio_thirds() {
        assert_eq!(gamma_ratio(&ratio(1, 3), &ratio(4, 3)).unwrap(), ratio(1, 3));
        assert_eq!(gamma_ratio(&ratio(7, 3), &ratio(1, 3)).unwrap(), ratio(9, 4));
    }

    #[test]
    fn factored_scalar_fractional_exponents() {
        let mut s = FactoredScalar::one();
        s.mul_prime_pow(5, &ratio(3, 8));
        assert!(s.finalize().is_err());
        s.mul_prime_pow(5, &ratio(5, 8));
        assert_eq!(s.finalize().unwrap(), rat(5));
    }
}

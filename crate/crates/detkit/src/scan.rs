//! Parameter box scan: compute determinant sequences over a family box,
//! factor them, flag the ones whose prime factors stay small, and detect
//! constant-times-shift relations between flagged specs.
//!
//! "Factors completely" is operationalized as: every prime factor of
//! |det(n)| is at most slope*n + 10. Zero determinants disqualify a spec
//! from that classification but are reported separately as singular.

use std::fmt::Write as _;

use num::bigint::Sign;
use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use rayon::prelude::*;

use crate::closedforms::FamilyKind;
use crate::detengine::det_bareiss;
use crate::exact::Rat;
use crate::families::{build_family, AnyMatrix};

// ------------------------------------------------------------ factoring

const TRIAL_LIMIT: u32 = 1_000_000;

static PRIMES: Lazy<Vec<u32>> = Lazy::new(|| {
    let n = TRIAL_LIMIT as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::with_capacity(78_498);
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        primes.push(p as u32);
        let mut m = p * p;
        while m <= n {
            composite[m] = true;
            m += p;
        }
    }
    primes
});

fn mulmod64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod64(acc, b, m);
        }
        b = mulmod64(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs (the 12-base certificate).
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's cycle variant of Pollard rho; n must be odd, composite, and
/// free of factors below the trial limit, so this always terminates.
fn brent_u64(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod64(x, x, n) + c) % n;
        let (mut x, mut q, mut g) = (2u64, 1u64, 1u64);
        let (mut y, mut ys) = (x, x);
        let mut r = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                let m = 128.min(r - k);
                for _ in 0..m {
                    y = f(y);
                    q = mulmod64(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            // backtrack one step at a time
            g = 1;
            while g == 1 {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
            }
        }
        if g != n {
            return g;
        }
        c += 2;
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = brent_u64(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

// The 12-base Miller-Rabin certificate extends to about 3.3e24; above
// that a fixed wider base set is used and the primality is only
// probabilistic, which the report flags.
static CERTIFIED_BOUND: Lazy<BigInt> =
    Lazy::new(|| "3317044064679887385961981".parse().unwrap());

fn is_prime_big(n: &BigInt) -> (bool, bool) {
    // returns (probably prime, certified)
    let certified = n < &*CERTIFIED_BOUND;
    let small: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in small {
        let p = BigInt::from(p);
        if *n == p {
            return (true, true);
        }
        if (n % &p).is_zero() {
            return (false, true);
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap();
    let d = &n1 >> s;
    let bases: Vec<u32> = if certified {
        small.to_vec()
    } else {
        PRIMES[..40].to_vec()
    };
    'witness: for a in bases {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2u32), n);
            if x == n1 {
                continue 'witness;
            }
        }
        return (false, true);
    }
    (true, certified)
}

fn brent_big(n: &BigInt, budget: &mut u64) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2u32));
    }
    let one = BigInt::one();
    for c in [1u32, 3, 5] {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let (mut x, mut q, mut g) = (BigInt::from(2u32), one.clone(), one.clone());
        let (mut y, mut ys) = (x.clone(), x.clone());
        let mut r = 1u64;
        while g.is_one() {
            if *budget == 0 {
                return None;
            }
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                let m = 128.min(r - k);
                for _ in 0..m {
                    y = f(&y);
                    q = (&q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += m;
                *budget = budget.saturating_sub(m);
            }
            r *= 2;
        }
        if g == *n {
            g = one.clone();
            while g.is_one() {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                *budget = budget.saturating_sub(1);
                if *budget == 0 {
                    return None;
                }
            }
        }
        if g != *n {
            return Some(g);
        }
    }
    None
}

fn factor_big_into(
    n: BigInt,
    out: &mut Vec<(BigInt, bool)>,
    unfactored: &mut Option<BigInt>,
    budget: &mut u64,
) {
    if n.is_one() {
        return;
    }
    if let Some(u) = n.to_u64() {
        let mut v = Vec::new();
        factor_u64_into(u, &mut v);
        out.extend(v.into_iter().map(|p| (BigInt::from(p), true)));
        return;
    }
    let (prime, certified) = is_prime_big(&n);
    if prime {
        out.push((n, certified));
        return;
    }
    match brent_big(&n, budget) {
        Some(d) => {
            let q = &n / &d;
            factor_big_into(d, out, unfactored, budget);
            factor_big_into(q, out, unfactored, budget);
        }
        None => {
            *unfactored = Some(match unfactored.take() {
                Some(u) => u * n,
                None => n,
            });
        }
    }
}

/// One prime power of a factorization. `certified` is false only for
/// primes too large for the deterministic Miller-Rabin certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorEntry {
    pub prime: BigInt,
    pub exp: u32,
    pub certified: bool,
}

/// Complete factorization of a nonzero integer, up to a possible
/// unfactored composite cofactor when the rho budget runs out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<FactorEntry>,
    pub unfactored: Option<BigInt>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_none()
    }

    /// Re-multiplied value; always equals the input.
    pub fn value(&self) -> BigInt {
        let mut v = BigInt::from(self.sign);
        for f in &self.factors {
            v *= f.prime.pow(f.exp);
        }
        if let Some(u) = &self.unfactored {
            v *= u;
        }
        v
    }

    pub fn largest_prime(&self) -> Option<&BigInt> {
        self.factors.last().map(|f| &f.prime)
    }

    pub fn all_certified(&self) -> bool {
        self.factors.iter().all(|f| f.certified)
    }

    /// `2^6 * 13` style text; `-` prefix for negatives, `1` for units.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if self.sign < 0 {
            s.push('-');
        }
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|f| {
                if f.exp == 1 {
                    f.prime.to_string()
                } else {
                    format!("{}^{}", f.prime, f.exp)
                }
            })
            .collect();
        if let Some(u) = &self.unfactored {
            parts.push(format!("C{u}"));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        s.push_str(&parts.join(" * "));
        s
    }
}

/// Factor a nonzero integer: trial division below 10^6, then Pollard rho
/// with deterministic primality testing for anything the 64-bit (and the
/// wider 3.3e24) Miller-Rabin certificate covers.
pub fn factor_integer(v: &BigInt) -> Result<Factorization, String> {
    if v.is_zero() {
        return Err("cannot factor zero".into());
    }
    let sign = if v.sign() == Sign::Minus { -1 } else { 1 };
    let mut rest = v.abs();
    let mut primes: Vec<(BigInt, bool)> = Vec::new();

    // trial division, downgrading the cofactor to the narrowest integer
    // type that holds it as it shrinks
    let mut idx = 0usize;
    while rest.to_u128().is_none() {
        match PRIMES.get(idx) {
            None => break,
            Some(&p) => {
                let pb = BigInt::from(p);
                while (&rest % &pb).is_zero() {
                    rest /= &pb;
                    primes.push((pb.clone(), true));
                }
                idx += 1;
            }
        }
    }
    if let Some(mut u) = rest.to_u128() {
        while u > u64::MAX as u128 {
            match PRIMES.get(idx) {
                None => break,
                Some(&p) => {
                    let p = p as u128;
                    while u % p == 0 {
                        u /= p;
                        primes.push((BigInt::from(p), true));
                    }
                    idx += 1;
                }
            }
        }
        if let Ok(mut w) = u64::try_from(u) {
            for &p in &PRIMES[idx.min(PRIMES.len())..] {
                let p = p as u64;
                if p * p > w {
                    break;
                }
                while w % p == 0 {
                    w /= p;
                    primes.push((BigInt::from(p), true));
                }
            }
            u = w as u128;
        }
        rest = BigInt::from(u);
    }

    let mut unfactored = None;
    if !rest.is_one() {
        // no factor below the trial limit, so anything under its square
        // is already prime
        if rest < BigInt::from(TRIAL_LIMIT as u64).pow(2) {
            primes.push((rest, true));
        } else {
            let mut budget: u64 = 3_000_000;
            factor_big_into(rest, &mut primes, &mut unfactored, &mut budget);
        }
    }

    primes.sort();
    let mut factors: Vec<FactorEntry> = Vec::new();
    for (p, certified) in primes {
        match factors.last_mut() {
            Some(f) if f.prime == p => f.exp += 1,
            _ => factors.push(FactorEntry {
                prime: p,
                exp: 1,
                certified,
            }),
        }
    }
    Ok(Factorization {
        sign,
        factors,
        unfactored,
    })
}

// ------------------------------------------------------------ smoothness

/// Factored determinant value at one dimension. Rational values carry a
/// separate denominator factorization (empty for integers).
#[derive(Debug, Clone)]
pub struct DetRecord {
    pub n: usize,
    pub value: Rat,
    pub num_factors: Option<Factorization>,
    pub den_factors: Option<Factorization>,
    pub largest_prime: Option<BigInt>,
}

/// Classification of one determinant sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqClass {
    Smooth,
    Rough,
    Singular,
}

fn prime_bound(slope: i64, n: usize) -> BigInt {
    BigInt::from(slope * n as i64 + 10)
}

/// Factor a determinant sequence (1-indexed by n) and classify it:
/// smooth iff no value is zero and every prime of |num| and den at index
/// n stays at or below slope*n + 10.
pub fn classify_sequence(values: &[Rat], slope: i64) -> (Vec<DetRecord>, SeqClass) {
    let mut records = Vec::with_capacity(values.len());
    let mut class = SeqClass::Smooth;
    for (idx, v) in values.iter().enumerate() {
        let n = idx + 1;
        if v.is_zero() {
            class = SeqClass::Singular;
            records.push(DetRecord {
                n,
                value: v.clone(),
                num_factors: None,
                den_factors: None,
                largest_prime: None,
            });
            continue;
        }
        let num = factor_integer(v.numer()).expect("nonzero numerator");
        let den = factor_integer(v.denom()).expect("nonzero denominator");
        let bound = prime_bound(slope, n);
        let mut largest: Option<BigInt> = None;
        for f in num.factors.iter().chain(den.factors.iter()) {
            if largest.as_ref().is_none_or(|l| f.prime > *l) {
                largest = Some(f.prime.clone());
            }
        }
        let over = largest.as_ref().is_some_and(|l| *l > bound)
            || !num.is_complete()
            || !den.is_complete();
        if over && class == SeqClass::Smooth {
            class = SeqClass::Rough;
        }
        records.push(DetRecord {
            n,
            value: v.clone(),
            num_factors: Some(num),
            den_factors: Some(den),
            largest_prime: largest,
        });
    }
    (records, class)
}

/// True iff every prime dividing any |value| at index n (1-based) stays
/// at or below slope*n + 10, with no zero values. Zero values make the
/// sequence ineligible; `classify_sequence` reports them as singular.
pub fn is_smooth_sequence(values: &[Rat], n_max: usize, slope: i64) -> bool {
    assert!(!values.is_empty(), "empty sequence");
    let take = n_max.min(values.len());
    let (_, class) = classify_sequence(&values[..take], slope);
    class == SeqClass::Smooth
}

// ------------------------------------------------------------ the scan

/// Inclusive parameter ranges for one family letter, plus the smoothness
/// and relation-detection knobs.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub kind: FamilyKind,
    pub alpha: (i64, i64),
    pub beta: (i64, i64),
    pub gamma: (i64, i64),
    pub delta: (i64, i64),
    pub n_max: usize,
    pub slope: i64,
    pub shift_max: usize,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<(), String> {
        for (lo, hi) in [self.alpha, self.beta, self.gamma, self.delta] {
            if lo > hi {
                return Err(format!("empty range {lo}..{hi}"));
            }
        }
        if self.n_max < 4 {
            return Err("n_max must be at least 4".into());
        }
        if self.slope < 1 {
            return Err("slope must be at least 1".into());
        }
        Ok(())
    }

    /// All parameter tuples in the box, lexicographic.
    pub fn tuples(&self) -> Vec<(i64, i64, i64, i64)> {
        let mut v = Vec::new();
        for a in self.alpha.0..=self.alpha.1 {
            for b in self.beta.0..=self.beta.1 {
                for c in self.gamma.0..=self.gamma.1 {
                    for d in self.delta.0..=self.delta.1 {
                        v.push((a, b, c, d));
                    }
                }
            }
        }
        v
    }
}

/// Parse the key = value config format:
///
/// ```text
/// family = D
/// range alpha = -2..2      # also: range α = -2..2
/// range beta  = -2..2
/// range gamma = -4..4
/// range delta = -4..4
/// n_max = 8
/// slope = 7
/// shift_max = 3            # optional, default 3
/// ```
pub fn parse_scan_config(text: &str) -> Result<ScanConfig, String> {
    let mut kind = None;
    let mut ranges: [Option<(i64, i64)>; 4] = [None; 4];
    let mut n_max = None;
    let mut slope = None;
    let mut shift_max = 3usize;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| format!("line {}: {m}", ln + 1);
        let (key, val) = line
            .split_once('=')
            .ok_or_else(|| err("expected key = value".into()))?;
        let key = key.trim().to_lowercase();
        let val = val.trim();
        match key.as_str() {
            "family" => {
                kind = Some(match val {
                    "D" | "d" => FamilyKind::D,
                    "E" | "e" => FamilyKind::E,
                    "F" | "f" => FamilyKind::F,
                    "G" | "g" => FamilyKind::G,
                    _ => return Err(err(format!("unknown family {val:?}"))),
                });
            }
            "range alpha" | "range α" => ranges[0] = Some(parse_range(val).map_err(err)?),
            "range beta" | "range β" => ranges[1] = Some(parse_range(val).map_err(err)?),
            "range gamma" | "range γ" => ranges[2] = Some(parse_range(val).map_err(err)?),
            "range delta" | "range δ" => ranges[3] = Some(parse_range(val).map_err(err)?),
            "n_max" | "nmax" => {
                n_max = Some(val.parse().map_err(|_| err(format!("bad n_max {val:?}")))?)
            }
            "slope" => {
                slope = Some(val.parse().map_err(|_| err(format!("bad slope {val:?}")))?)
            }
            "shift_max" => {
                shift_max = val
                    .parse()
                    .map_err(|_| err(format!("bad shift_max {val:?}")))?
            }
            _ => return Err(err(format!("unknown key {key:?}"))),
        }
    }
    let cfg = ScanConfig {
        kind: kind.ok_or("missing family")?,
        alpha: ranges[0].ok_or("missing range alpha")?,
        beta: ranges[1].ok_or("missing range beta")?,
        gamma: ranges[2].ok_or("missing range gamma")?,
        delta: ranges[3].ok_or("missing range delta")?,
        n_max: n_max.ok_or("missing n_max")?,
        slope: slope.ok_or("missing slope")?,
        shift_max,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("bad range {s:?}; expected lo..hi"))?;
    let lo = lo.trim().parse().map_err(|_| format!("bad range start {s:?}"))?;
    let hi = hi.trim().parse().map_err(|_| format!("bad range end {s:?}"))?;
    Ok((lo, hi))
}

/// One detected relation: det of this spec at n equals
/// constant * det(other at n + shift), for all checked n.
#[derive(Debug, Clone)]
pub struct RelationHit {
    pub other: String,
    pub shift: usize,
    pub constant: Rat,
    pub points: usize,
}

/// Everything the scan learned about one spec.
#[derive(Debug, Clone)]
pub struct ScanReport {
    pub spec_text: String,
    pub params: (i64, i64, i64, i64),
    pub dets: Vec<DetRecord>,
    pub class: SeqClass,
    pub relations: Vec<RelationHit>,
    pub error: Option<String>,
}

const RELATION_N_FROM: usize = 4;

/// Scan the whole box: determinants for n = 1..=n_max per spec, factored
/// and classified, then constant-times-shift relation detection among
/// the smooth specs. Output order is the lexicographic tuple order, and
/// does not depend on the worker count.
pub fn run_scan(cfg: &ScanConfig) -> Result<Vec<ScanReport>, String> {
    cfg.validate()?;
    let tuples = cfg.tuples();
    let mut reports: Vec<ScanReport> = tuples
        .par_iter()
        .map(|&p| {
            let spec = cfg.kind.spec(p);
            let values: Vec<Rat> = (1..=cfg.n_max)
                .map(|n| match build_family(&spec, n) {
                    AnyMatrix::Num(m) => det_bareiss(&m),
                    _ => unreachable!("letter families are numeric"),
                })
                .collect();
            let (dets, class) = classify_sequence(&values, cfg.slope);
            ScanReport {
                spec_text: spec.to_text(),
                params: p,
                dets,
                class,
                relations: Vec::new(),
                error: None,
            }
        })
        .collect();

    // relation detection among the smooth specs
    let smooth: Vec<usize> = (0..reports.len())
        .filter(|&i| reports[i].class == SeqClass::Smooth)
        .collect();
    let mut hits: Vec<(usize, RelationHit)> = Vec::new();
    for &i in &smooth {
        for &k in &smooth {
            if i == k {
                continue;
            }
            for shift in 0..=cfg.shift_max {
                let ns: Vec<usize> = (RELATION_N_FROM..=cfg.n_max.saturating_sub(shift)).collect();
                if ns.len() < 2 {
                    continue;
                }
                let val = |r: usize, n: usize| -> &Rat { &reports[r].dets[n - 1].value };
                // smooth sequences have no zeros, so the first point fixes c
                let c = val(i, ns[0]) / val(k, ns[0] + shift);
                if ns[1..].iter().all(|&n| val(i, n) == &(&c * val(k, n + shift))) {
                    hits.push((
                        i,
                        RelationHit {
                            other: reports[k].spec_text.clone(),
                            shift,
                            constant: c,
                            points: ns.len(),
                        },
                    ));
                }
            }
        }
    }
    for (i, hit) in hits {
        reports[i].relations.push(hit);
    }
    Ok(reports)
}

// --------------------------------------------------------- serialization

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

fn rat_text(v: &Rat) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

fn factorization_json(f: &Option<Factorization>) -> String {
    let Some(f) = f else {
        return "null".into();
    };
    let mut s = String::from("{\"factors\":[");
    for (i, e) in f.factors.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(
            s,
            "{{\"p\":\"{}\",\"e\":{},\"certified\":{}}}",
            e.prime, e.exp, e.certified
        );
    }
    s.push_str("],\"unfactored\":");
    match &f.unfactored {
        Some(u) => {
            let _ = write!(s, "\"{u}\"");
        }
        None => s.push_str("null"),
    }
    if f.sign < 0 {
        s.push_str(",\"sign\":-1");
    }
    s.push('}');
    s
}

/// One report as a single JSON line. Big integers print as decimal
/// strings; the output is byte-stable for a given report.
pub fn report_json(r: &ScanReport) -> String {
    let class = match r.class {
        SeqClass::Smooth => "smooth",
        SeqClass::Rough => "rough",
        SeqClass::Singular => "singular",
    };
    let mut s = String::from("{");
    let _ = write!(s, "\"schema\":1,\"spec\":\"{}\"", json_escape(&r.spec_text));
    let _ = write!(
        s,
        ",\"params\":[{},{},{},{}]",
        r.params.0, r.params.1, r.params.2, r.params.3
    );
    let _ = write!(s, ",\"class\":\"{class}\"");
    s.push_str(",\"dets\":[");
    for (i, d) in r.dets.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(
            s,
            "{{\"n\":{},\"value\":\"{}\",\"num_factors\":{},\"den_factors\":{},\"largest_prime\":{}}}",
            d.n,
            rat_text(&d.value),
            factorization_json(&d.num_factors),
            factorization_json(&d.den_factors),
            match &d.largest_prime {
                Some(p) => format!("\"{p}\""),
                None => "null".into(),
            }
        );
    }
    s.push_str("],\"relations\":[");
    for (i, h) in r.relations.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(
            s,
            "{{\"other\":\"{}\",\"shift\":{},\"constant\":\"{}\",\"points\":{}}}",
            json_escape(&h.other),
            h.shift,
            rat_text(&h.constant),
            h.points
        );
    }
    s.push_str("],\"error\":");
    match &r.error {
        Some(e) => {
            let _ = write!(s, "\"{}\"", json_escape(e));
        }
        None => s.push_str("null"),
    }
    s.push('}');
    s
}

/// JSON lines, one spec per line, in report order.
pub fn reports_jsonl(rs: &[ScanReport]) -> String {
    let mut s = String::new();
    for r in rs {
        s.push_str(&report_json(r));
        s.push('\n');
    }
    s
}

/// CSV summary: one row per spec with the classification, the largest
/// prime seen, and the detected relations.
pub fn reports_csv(rs: &[ScanReport]) -> String {
    let mut s = String::from("spec,class,largest_prime,det_n_max,relations\n");
    for r in rs {
        let class = match r.class {
            SeqClass::Smooth => "smooth",
            SeqClass::Rough => "rough",
            SeqClass::Singular => "singular",
        };
        let largest = r
            .dets
            .iter()
            .filter_map(|d| d.largest_prime.as_ref())
            .max()
            .map(|p| p.to_string())
            .unwrap_or_default();
        let last = r
            .dets
            .last()
            .map(|d| rat_text(&d.value))
            .unwrap_or_default();
        let rels = r
            .relations
            .iter()
            .map(|h| format!("{} shift={} c={}", h.other, h.shift, rat_text(&h.constant)))
            .collect::<Vec<_>>()
            .join("; ");
        let _ = writeln!(s, "{},{class},{largest},{last},\"{rels}\"", r.spec_text);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn factors_of(v: i64) -> Vec<(i64, u32)> {
        factor_integer(&BigInt::from(v))
            .unwrap()
            .factors
            .iter()
            .map(|f| (f.prime.to_i64().unwrap(), f.exp))
            .collect()
    }

    #[test]
    fn factor_small_values() {
        assert_eq!(factors_of(8), vec![(2, 3)]);
        assert_eq!(factors_of(832), vec![(2, 6), (13, 1)]);
        assert_eq!(factors_of(16445), vec![(5, 1), (11, 1), (13, 1), (23, 1)]);
        assert_eq!(factors_of(-12), vec![(2, 2), (3, 1)]);
        assert!(factor_integer(&BigInt::zero()).is_err());
    }

    #[test]
    fn factor_remultiplies_exactly() {
        for v in [1i64, -1, 2, 97, 1009, 2 * 3 * 5 * 7 * 11 * 13, 1 << 40] {
            let f = factor_integer(&BigInt::from(v)).unwrap();
            assert_eq!(f.value(), BigInt::from(v));
            assert!(f.is_complete() && f.all_certified());
        }
        // product of two primes beyond the trial limit forces rho
        let p = BigInt::from(1_000_003u64);
        let q = BigInt::from(1_000_033u64);
        let f = factor_integer(&(&p * &q)).unwrap();
        assert_eq!(f.value(), &p * &q);
        assert_eq!(f.factors.len(), 2);
        // a 70-bit semiprime exercises the big-integer path
        let p: BigInt = "1000000007".parse().unwrap();
        let q: BigInt = "1000000009".parse().unwrap();
        let big = &p * &q * &p;
        let f = factor_integer(&big).unwrap();
        assert_eq!(f.value(), big);
        assert!(f.is_complete());
    }

    #[test]
    fn prime_tests_agree_on_a_range() {
        let mut primes = vec![];
        for n in 2u64..200 {
            if is_prime_u64(n) {
                primes.push(n);
            }
        }
        assert_eq!(&primes[..8], &[2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64((1u64 << 62) - 1));
    }

    #[test]
    fn smoothness_examples() {
        // 1, 2, 6, 1009: the prime 1009 exceeds 7*4 + 10
        let vals: Vec<Rat> = [1, 2, 6, 1009].iter().map(|&v| rat(v)).collect();
        assert!(!is_smooth_sequence(&vals, 4, 7));
        let ones: Vec<Rat> = vec![rat(1); 6];
        assert!(is_smooth_sequence(&ones, 6, 7));
        let with_zero: Vec<Rat> = vec![rat(1), rat(0), rat(2)];
        assert!(!is_smooth_sequence(&with_zero, 3, 7));
        let (_, class) = classify_sequence(&with_zero, 7);
        assert_eq!(class, SeqClass::Singular);
        // rational values factor on both sides of the bar
        let halves: Vec<Rat> = (1..=4).map(|n| ratio(3, 1 << n)).collect();
        assert!(is_smooth_sequence(&halves, 4, 7));
        let rough: Vec<Rat> = vec![ratio(1, 1009); 4];
        assert!(!is_smooth_sequence(&rough, 4, 7));
    }

    #[test]
    fn config_parsing() {
        let text = "\
# scan box
family = D
range alpha = -2..2
range beta = -2..2
range gamma = -4..4
range delta = -4..4
n_max = 8
slope = 7
";
        let cfg = parse_scan_config(text).unwrap();
        assert_eq!(cfg.kind, FamilyKind::D);
        assert_eq!(cfg.alpha, (-2, 2));
        assert_eq!(cfg.delta, (-4, 4));
        assert_eq!(cfg.n_max, 8);
        assert_eq!(cfg.shift_max, 3);
        assert_eq!(cfg.tuples().len(), 25 * 81);
        assert!(parse_scan_config("family = D\n").is_err());
        assert!(parse_scan_config(&text.replace("-2..2", "2..-2")).is_err());
        assert!(parse_scan_config(&text.replace("slope = 7", "slope = 0")).is_err());
        // the documented Greek spelling works too
        let greek = text.replace("range alpha", "range α");
        assert_eq!(parse_scan_config(&greek).unwrap().alpha, (-2, 2));
    }

    #[test]
    fn tiny_scan_finds_a_known_relation() {
        // a 2x2x1x1 corner of the box containing the pair related by
        // det(1,1,-1,-3)(n) = 8 * det(2,1,2,0)(n-1)
        let cfg = ScanConfig {
            kind: FamilyKind::D,
            alpha: (1, 2),
            beta: (1, 1),
            gamma: (-1, 2),
            delta: (-3, 0),
            n_max: 6,
            slope: 7,
            shift_max: 3,
        };
        let reports = run_scan(&cfg).unwrap();
        assert_eq!(reports.len(), 2 * 1 * 4 * 4);
        let r2120 = reports
            .iter()
            .find(|r| r.spec_text == "D[2,1,2,0]")
            .unwrap();
        assert_eq!(r2120.class, SeqClass::Smooth);
        assert!(r2120
            .relations
            .iter()
            .any(|h| h.other == "D[1,1,-1,-3]" && h.shift == 1 && h.constant == ratio(1, 8)));
        let jsonl = reports_jsonl(&reports);
        assert_eq!(jsonl.lines().count(), reports.len());
        assert!(jsonl.contains("\"schema\":1"));
        let csv = reports_csv(&reports);
        assert!(csv.starts_with("spec,class,largest_prime"));
    }

    #[test]
    fn scan_is_deterministic_across_worker_counts() {
        let cfg = ScanConfig {
            kind: FamilyKind::D,
            alpha: (0, 1),
            beta: (0, 1),
            gamma: (0, 1),
            delta: (-1, 0),
            n_max: 5,
            slope: 7,
            shift_max: 2,
        };
        let baseline = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| reports_jsonl(&run_scan(&cfg).unwrap()));
        let wide = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| reports_jsonl(&run_scan(&cfg).unwrap()));
        assert_eq!(baseline, wide);
    }
}

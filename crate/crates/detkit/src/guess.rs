//! Recurrence guessing over exact data: fit linear recurrences with
//! polynomial coefficients to tables of rational values, check given
//! recurrences against data, and unroll recurrences to extend tables.
//!
//! Fitting is heuristic. A nonempty result means the homogeneous system
//! built from a data window has a nontrivial exact nullspace and every
//! basis element also vanishes on the held-out points; it is evidence,
//! not proof, and all output is tagged accordingly.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::detengine::{cofactor_sequence, CofactorSequence};
use crate::exact::{parse_rat, rat, Rat};
use crate::families::FamilySpec;
use crate::poly::{rat_content, MPoly};

/// Variable names for recurrence coefficients: slot 0 is n, slot 1 is j.
pub const REC_VARS: [&str; 3] = ["n", "j", "_"];

/// A table point: n alone for sequences, (n, j) for triangular arrays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GridPoint {
    N(i64),
    NJ(i64, i64),
}

impl GridPoint {
    pub fn to_text(&self) -> String {
        match self {
            GridPoint::N(n) => format!("n={n}"),
            GridPoint::NJ(n, j) => format!("n={n},j={j}"),
        }
    }

    fn coords(&self) -> (i64, i64) {
        match *self {
            GridPoint::N(n) => (n, 0),
            GridPoint::NJ(n, j) => (n, j),
        }
    }
}

/// Shift vectors of a recurrence Ansatz. Uni shifts act on n alone, Bi
/// shifts on (n, j); the element (0,0) (or 0) is the identity term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShiftSupport {
    Uni(Vec<i64>),
    Bi(Vec<(i64, i64)>),
}

impl ShiftSupport {
    pub fn uni(shifts: Vec<i64>) -> Result<Self, String> {
        if shifts.is_empty() {
            return Err("empty support".into());
        }
        let mut seen = BTreeSet::new();
        for &s in &shifts {
            if s < 0 {
                return Err("negative shifts are not supported".into());
            }
            if !seen.insert(s) {
                return Err(format!("duplicate shift {s} in support"));
            }
        }
        Ok(ShiftSupport::Uni(shifts))
    }

    pub fn bi(shifts: Vec<(i64, i64)>) -> Result<Self, String> {
        if shifts.is_empty() {
            return Err("empty support".into());
        }
        let mut seen = BTreeSet::new();
        for &(p, q) in &shifts {
            if p < 0 || q < 0 {
                return Err("negative shifts are not supported".into());
            }
            if !seen.insert((p, q)) {
                return Err(format!("duplicate shift ({p},{q}) in support"));
            }
        }
        Ok(ShiftSupport::Bi(shifts))
    }

    pub fn len(&self) -> usize {
        match self {
            ShiftSupport::Uni(v) => v.len(),
            ShiftSupport::Bi(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_bi(&self) -> bool {
        matches!(self, ShiftSupport::Bi(_))
    }

    /// The point reached from `p` by support element `k`.
    pub fn shifted(&self, k: usize, p: &GridPoint) -> GridPoint {
        match (self, p) {
            (ShiftSupport::Uni(v), GridPoint::N(n)) => GridPoint::N(n + v[k]),
            (ShiftSupport::Bi(v), GridPoint::NJ(n, j)) => GridPoint::NJ(n + v[k].0, j + v[k].1),
            _ => panic!("support arity does not match the point"),
        }
    }

    /// Index of the element that dominates every other one componentwise.
    /// Unrolling needs this to be unique.
    pub fn leading(&self) -> Result<usize, String> {
        match self {
            ShiftSupport::Uni(v) => {
                let (k, _) = v.iter().enumerate().max_by_key(|(_, &s)| s).unwrap();
                Ok(k)
            }
            ShiftSupport::Bi(v) => {
                for (k, &(p, q)) in v.iter().enumerate() {
                    if v.iter().all(|&(p2, q2)| p >= p2 && q >= q2) {
                        return Ok(k);
                    }
                }
                Err("no support element dominates the rest componentwise".into())
            }
        }
    }

    /// Shift vectors as sorted pairs, for order-insensitive comparison.
    pub fn normalized(&self) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = match self {
            ShiftSupport::Uni(s) => s.iter().map(|&p| (p, 0)).collect(),
            ShiftSupport::Bi(s) => s.clone(),
        };
        v.sort();
        v
    }

    pub fn to_text(&self) -> String {
        let name = |p: i64, q: i64, uni: bool| -> String {
            if p == 0 && q == 0 {
                return "1".into();
            }
            let mut parts = Vec::new();
            let sym = if uni { "S" } else { "Sn" };
            if p == 1 {
                parts.push(sym.to_string());
            } else if p > 1 {
                parts.push(format!("{sym}^{p}"));
            }
            if q == 1 {
                parts.push("Sj".into());
            } else if q > 1 {
                parts.push(format!("Sj^{q}"));
            }
            parts.join("*")
        };
        match self {
            ShiftSupport::Uni(v) => v
                .iter()
                .map(|&p| name(p, 0, true))
                .collect::<Vec<_>>()
                .join(", "),
            ShiftSupport::Bi(v) => v
                .iter()
                .map(|&(p, q)| name(p, q, false))
                .collect::<Vec<_>>()
                .join(", "),
        }
    }
}

fn split_top_level(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

enum SupportTok {
    Neutral,
    U(i64),
    B(i64, i64),
}

fn parse_support_token(tok: &str) -> Result<SupportTok, String> {
    let t = tok.trim();
    if t == "1" {
        return Ok(SupportTok::Neutral);
    }
    if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let ints: Result<Vec<i64>, _> = parts.iter().map(|p| p.parse::<i64>()).collect();
        let ints = ints.map_err(|_| format!("bad shift vector {t:?}"))?;
        return match ints[..] {
            [p] => Ok(SupportTok::U(p)),
            [p, q] => Ok(SupportTok::B(p, q)),
            _ => Err(format!("shift vector {t:?} must have one or two entries")),
        };
    }
    if t.chars().all(|c| c.is_ascii_digit()) {
        return Ok(SupportTok::U(t.parse().unwrap()));
    }
    // S-token grammar: "S"/"S2"/"S^2" (univariate) or products of
    // "Sn"/"Sj" with optional exponents: "Sj2", "Sn^2", "SnSj".
    let bytes = t.as_bytes();
    let mut i = 0usize;
    let mut p = 0i64;
    let mut q = 0i64;
    let mut bivar = false;
    let mut uni_exp: Option<i64> = None;
    while i < bytes.len() {
        if bytes[i] != b'S' {
            return Err(format!("bad support token {t:?}"));
        }
        i += 1;
        let var = match bytes.get(i) {
            Some(b'n') => {
                i += 1;
                bivar = true;
                Some('n')
            }
            Some(b'j') => {
                i += 1;
                bivar = true;
                Some('j')
            }
            _ => None,
        };
        if bytes.get(i) == Some(&b'^') {
            i += 1;
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let e: i64 = if start == i {
            1
        } else {
            t[start..i].parse().unwrap()
        };
        if bytes.get(i) == Some(&b'*') {
            i += 1;
        }
        match var {
            Some('n') => p += e,
            Some('j') => q += e,
            Some(_) => unreachable!(),
            None => uni_exp = Some(uni_exp.unwrap_or(0) + e),
        }
    }
    if bivar {
        if uni_exp.is_some() {
            return Err(format!("mixed S and Sn/Sj in token {t:?}"));
        }
        Ok(SupportTok::B(p, q))
    } else {
        Ok(SupportTok::U(uni_exp.unwrap_or(0)))
    }
}

/// Parse a comma-separated support listing: named tokens ("Sj2,Sn,Sj,1",
/// "S2,S,1"), raw shifts ("2,1,0"), or raw vectors ("(1,1),(0,1),(0,0)").
pub fn parse_support(text: &str) -> Result<ShiftSupport, String> {
    let toks = split_top_level(text);
    if toks.is_empty() {
        return Err("empty support".into());
    }
    // an all-integer listing is a plain univariate shift list, where "1"
    // means the shift 1 rather than the identity term
    if toks.iter().all(|t| t.chars().all(|c| c.is_ascii_digit())) {
        return ShiftSupport::uni(toks.iter().map(|t| t.parse().unwrap()).collect());
    }
    let parsed: Result<Vec<SupportTok>, String> =
        toks.iter().map(|t| parse_support_token(t)).collect();
    let parsed = parsed?;
    let any_bi = parsed.iter().any(|t| matches!(t, SupportTok::B(..)));
    if any_bi {
        let mut v = Vec::new();
        for t in parsed {
            match t {
                SupportTok::Neutral => v.push((0, 0)),
                SupportTok::B(p, q) => v.push((p, q)),
                SupportTok::U(_) => {
                    return Err("cannot mix univariate and bivariate shifts".into())
                }
            }
        }
        ShiftSupport::bi(v)
    } else {
        let mut v = Vec::new();
        for t in parsed {
            match t {
                SupportTok::Neutral => v.push(0),
                SupportTok::U(p) => v.push(p),
                SupportTok::B(..) => unreachable!(),
            }
        }
        ShiftSupport::uni(v)
    }
}

/// A linear recurrence with polynomial coefficients, one per support
/// element: sum_k coeff_k(n, j) * value(point + shift_k) = 0.
/// Coefficients are stored with integer coprime content and the leading
/// term of the first nonzero coefficient positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recurrence {
    pub support: ShiftSupport,
    pub coeffs: Vec<MPoly>,
}

fn grlex_leading(m: &MPoly) -> Option<(&[i32; 3], &Rat)> {
    m.terms.iter().max_by(|(a, _), (b, _)| {
        let ta: i64 = a.iter().map(|&e| e as i64).sum();
        let tb: i64 = b.iter().map(|&e| e as i64).sum();
        ta.cmp(&tb).then_with(|| a.cmp(b))
    })
}

impl Recurrence {
    pub fn new(support: ShiftSupport, coeffs: Vec<MPoly>) -> Result<Self, String> {
        if coeffs.len() != support.len() {
            return Err(format!(
                "{} coefficients for {} support elements",
                coeffs.len(),
                support.len()
            ));
        }
        if coeffs.iter().all(MPoly::is_zero) {
            return Err("all coefficients are zero".into());
        }
        for c in &coeffs {
            if c.terms.keys().any(|e| e.iter().any(|&x| x < 0)) {
                return Err("coefficients must be polynomial".into());
            }
            if c.degree_in(2) > 0 {
                return Err("coefficients may use slots n and j only".into());
            }
            if !support.is_bi() && c.degree_in(1) > 0 {
                return Err("univariate recurrence with a j-dependent coefficient".into());
            }
        }
        let mut r = Recurrence { support, coeffs };
        r.normalize();
        Ok(r)
    }

    fn normalize(&mut self) {
        let content = rat_content(self.coeffs.iter().flat_map(|c| c.terms.values()));
        if !content.is_zero() && !content.is_one() {
            let inv = rat(1) / content;
            for c in &mut self.coeffs {
                *c = c.scale(&inv);
            }
        }
        let flip = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .and_then(grlex_leading)
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false);
        if flip {
            for c in &mut self.coeffs {
                *c = c.neg();
            }
        }
    }

    /// Sum of total degrees of the coefficients, for report ordering.
    pub fn degree_weight(&self) -> i64 {
        self.coeffs.iter().map(MPoly::total_degree).sum()
    }

    /// Residual at one data point; None when a shifted value is missing.
    pub fn residual_at(&self, data: &DataTable, p: &GridPoint) -> Option<Rat> {
        let (n, j) = p.coords();
        let args = [Rat::from_integer(n.into()), Rat::from_integer(j.into()), rat(1)];
        let mut acc: Rat = Zero::zero();
        for k in 0..self.support.len() {
            let v = data.get(&self.support.shifted(k, p))?;
            let c = self.coeffs[k]
                .eval(&args)
                .expect("polynomial coefficients evaluate");
            acc += c * v;
        }
        Some(acc)
    }

    pub fn coeff_text(&self, k: usize) -> String {
        self.coeffs[k].to_text_with(&REC_VARS)
    }

    /// JSON form: support vectors plus canonical coefficient text.
    pub fn to_json(&self) -> String {
        let mut s = String::from("{\"support\":[");
        match &self.support {
            ShiftSupport::Uni(v) => {
                for (i, p) in v.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    let _ = write!(s, "{p}");
                }
            }
            ShiftSupport::Bi(v) => {
                for (i, (p, q)) in v.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    let _ = write!(s, "[{p},{q}]");
                }
            }
        }
        s.push_str("],\"coefficients\":[");
        for k in 0..self.coeffs.len() {
            if k > 0 {
                s.push(',');
            }
            let _ = write!(s, "{:?}", self.coeff_text(k));
        }
        s.push_str("]}");
        s
    }
}

/// Exact values on an explicit finite set of points. Absent keys mean
/// "unknown", never zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataTable {
    Uni(std::collections::BTreeMap<i64, Rat>),
    Bi(std::collections::BTreeMap<(i64, i64), Rat>),
}

impl DataTable {
    pub fn new_uni() -> Self {
        DataTable::Uni(Default::default())
    }

    pub fn new_bi() -> Self {
        DataTable::Bi(Default::default())
    }

    pub fn from_uni(it: impl IntoIterator<Item = (i64, Rat)>) -> Self {
        DataTable::Uni(it.into_iter().collect())
    }

    pub fn is_bi(&self) -> bool {
        matches!(self, DataTable::Bi(_))
    }

    pub fn len(&self) -> usize {
        match self {
            DataTable::Uni(m) => m.len(),
            DataTable::Bi(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, p: &GridPoint) -> Option<&Rat> {
        match (self, p) {
            (DataTable::Uni(m), GridPoint::N(n)) => m.get(n),
            (DataTable::Bi(m), GridPoint::NJ(n, j)) => m.get(&(*n, *j)),
            _ => None,
        }
    }

    pub fn insert(&mut self, p: GridPoint, v: Rat) -> Result<(), String> {
        match (self, p) {
            (DataTable::Uni(m), GridPoint::N(n)) => {
                m.insert(n, v);
                Ok(())
            }
            (DataTable::Bi(m), GridPoint::NJ(n, j)) => {
                m.insert((n, j), v);
                Ok(())
            }
            _ => Err("point arity does not match the table".into()),
        }
    }

    /// All points in lexicographic order.
    pub fn points(&self) -> Vec<GridPoint> {
        match self {
            DataTable::Uni(m) => m.keys().map(|&n| GridPoint::N(n)).collect(),
            DataTable::Bi(m) => m.keys().map(|&(n, j)| GridPoint::NJ(n, j)).collect(),
        }
    }

    /// CSV with exact rational cells: header `n,value` or `n,j,value`.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        match self {
            DataTable::Uni(m) => {
                s.push_str("n,value\n");
                for (n, v) in m {
                    let _ = writeln!(s, "{n},{v}");
                }
            }
            DataTable::Bi(m) => {
                s.push_str("n,j,value\n");
                for ((n, j), v) in m {
                    let _ = writeln!(s, "{n},{j},{v}");
                }
            }
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<DataTable, String> {
        let mut lines = text
            .lines()
            .map(|l| l.trim_end_matches('\r').trim())
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or("empty table file")?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        let mut table = match cols[..] {
            ["n", "value"] => DataTable::new_uni(),
            ["n", "j", "value"] => DataTable::new_bi(),
            _ => return Err(format!("bad header {header:?}; expected n,value or n,j,value")),
        };
        for (idx, line) in lines.enumerate() {
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            let err = |m: &str| format!("row {}: {m}", idx + 2);
            match (&mut table, &cells[..]) {
                (DataTable::Uni(m), [n, v]) => {
                    let n: i64 = n.parse().map_err(|_| err("bad n"))?;
                    m.insert(n, parse_rat(v).map_err(|e| err(&e))?);
                }
                (DataTable::Bi(m), [n, j, v]) => {
                    let n: i64 = n.parse().map_err(|_| err("bad n"))?;
                    let j: i64 = j.parse().map_err(|_| err("bad j"))?;
                    m.insert((n, j), parse_rat(v).map_err(|e| err(&e))?);
                }
                _ => return Err(err("wrong number of cells")),
            }
        }
        Ok(table)
    }
}

/// Cofactor sequences c_{n,j} (j = 0..n-1, normalized c_{n,n-1} = 1) of a
/// numeric family spec, collected for n = 1..=n_max.
pub fn cofactor_table(spec: &FamilySpec, n_max: usize) -> Result<DataTable, String> {
    let mut t = DataTable::new_bi();
    for n in 1..=n_max {
        match cofactor_sequence(spec, n)? {
            CofactorSequence::Num(c) => {
                for (j, v) in c.into_iter().enumerate() {
                    t.insert(GridPoint::NJ(n as i64, j as i64), v)?;
                }
            }
            CofactorSequence::Sym(_) => {
                return Err("cofactor tables need a fully numeric spec".into())
            }
        }
    }
    Ok(t)
}

fn instantiable_points(data: &DataTable, support: &ShiftSupport) -> Vec<GridPoint> {
    data.points()
        .into_iter()
        .filter(|p| (0..support.len()).all(|k| data.get(&support.shifted(k, p)).is_some()))
        .collect()
}

// Modular fast path. Rank over F_p bounds the rational rank from below,
// so nullity 0 mod p proves nullity 0 over Q; anything else falls back
// to the exact elimination.
const FIT_PRIME: u64 = (1 << 61) - 1;

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    acc
}

fn big_mod(v: &BigInt, p: u64) -> u64 {
    let m = v % BigInt::from(p);
    let m = if m.sign() == num::bigint::Sign::Minus {
        m + BigInt::from(p)
    } else {
        m
    };
    m.to_u64().unwrap()
}

fn rat_mod(v: &Rat, p: u64) -> Option<u64> {
    let den = big_mod(v.denom(), p);
    if den == 0 {
        return None;
    }
    Some(mulm(big_mod(v.numer(), p), powm(den, p - 2, p), p))
}

fn nullity_mod_p(rows: &[Vec<Rat>], cols: usize) -> Option<usize> {
    let p = FIT_PRIME;
    let mut m: Vec<Vec<u64>> = Vec::with_capacity(rows.len());
    for row in rows {
        let r: Option<Vec<u64>> = row.iter().map(|v| rat_mod(v, p)).collect();
        m.push(r?);
    }
    let nr = m.len();
    let mut rank = 0usize;
    for c in 0..cols {
        let Some(piv) = (rank..nr).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = powm(m[rank][c], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = mulm(*x, inv, p);
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - mulm(f, *y, p)) % p;
                }
            }
        }
        rank += 1;
        if rank == nr {
            break;
        }
    }
    Some(cols - rank)
}

/// Exact nullspace basis of the row system, columns processed left to
/// right (deterministic). Rows are content-stripped first.
fn nullspace_rat(rows: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows
        .iter()
        .map(|row| {
            let content = rat_content(row.iter());
            if content.is_zero() || content.is_one() {
                row.clone()
            } else {
                row.iter().map(|v| v / &content).collect()
            }
        })
        .collect();
    let nr = m.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut rank = 0usize;
    for c in 0..cols {
        let Some(piv) = (rank..nr).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][c].clone();
        for x in m[rank].iter_mut() {
            *x = &*x / &inv;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    let t = &f * y;
                    *x -= t;
                }
            }
        }
        pivot_of_col[c] = Some(rank);
        rank += 1;
        if rank == nr {
            break;
        }
    }
    let mut basis = Vec::new();
    for f in 0..cols {
        if pivot_of_col[f].is_some() {
            continue;
        }
        let mut v: Vec<Rat> = vec![Zero::zero(); cols];
        v[f] = One::one();
        for (c, piv) in pivot_of_col.iter().enumerate() {
            if let Some(r) = piv {
                v[c] = -m[*r][f].clone();
            }
        }
        basis.push(v);
    }
    basis
}

fn rat_rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let basis = nullspace_rat(rows, cols);
    cols - basis.len()
}

/// True when `rec` lies in the rational span of `basis` (same support,
/// any scaling).
pub fn in_span(basis: &[Recurrence], rec: &Recurrence) -> bool {
    if basis.is_empty() || basis.iter().any(|b| b.support != rec.support) {
        return false;
    }
    let mut cols: BTreeSet<(usize, [i32; 3])> = BTreeSet::new();
    for r in basis.iter().chain(std::iter::once(rec)) {
        for (k, c) in r.coeffs.iter().enumerate() {
            for e in c.terms.keys() {
                cols.insert((k, *e));
            }
        }
    }
    let cols: Vec<(usize, [i32; 3])> = cols.into_iter().collect();
    let to_vec = |r: &Recurrence| -> Vec<Rat> {
        cols.iter()
            .map(|(k, e)| r.coeffs[*k].terms.get(e).cloned().unwrap_or_else(Zero::zero))
            .collect()
    };
    let mut rows: Vec<Vec<Rat>> = basis.iter().map(to_vec).collect();
    let base_rank = rat_rank(&rows);
    rows.push(to_vec(rec));
    rat_rank(&rows) == base_rank
}

/// Result of a fit: a nullspace basis as recurrences, plus the window
/// bookkeeping behind the conjectural tag.
#[derive(Debug, Clone)]
pub struct Fit {
    pub basis: Vec<Recurrence>,
    pub unknowns: usize,
    pub window_points: usize,
    pub held_out_points: usize,
    pub dropped_spurious: usize,
    pub tag: String,
}

fn monomials(bi: bool, degree: usize) -> Vec<[i32; 3]> {
    let d = degree as i32;
    if bi {
        let mut v = Vec::new();
        for da in 0..=d {
            for db in 0..=(d - da) {
                v.push([da, db, 0]);
            }
        }
        v
    } else {
        (0..=d).map(|da| [da, 0, 0]).collect()
    }
}

/// Fit recurrences with the given support and coefficient degree (total
/// degree in n, j) to the table. The homogeneous system is built on a
/// window (the first 70 percent of instantiable points in lex order, at
/// least unknowns + 5), solved exactly over Rat, and every basis vector
/// is then required to vanish on the held-out remainder.
pub fn fit_recurrence(
    data: &DataTable,
    support: &ShiftSupport,
    coeff_degree: usize,
) -> Result<Fit, String> {
    if data.is_bi() != support.is_bi() {
        return Err("support arity does not match the table".into());
    }
    let monos = monomials(support.is_bi(), coeff_degree);
    let unknowns = support.len() * monos.len();
    let pts = instantiable_points(data, support);
    if pts.len() < unknowns + 10 {
        return Err(format!(
            "insufficient data: {} instantiable points for {} unknowns; need at least {}",
            pts.len(),
            unknowns,
            unknowns + 10
        ));
    }
    let window_len = ((7 * pts.len() + 9) / 10)
        .max(unknowns + 5)
        .min(pts.len() - 1);
    let (window, held) = pts.split_at(window_len);

    let rows: Vec<Vec<Rat>> = window
        .par_iter()
        .map(|p| {
            let (n, j) = p.coords();
            let nr = Rat::from_integer(n.into());
            let jr = Rat::from_integer(j.into());
            let mut row = Vec::with_capacity(unknowns);
            for k in 0..support.len() {
                let v = data.get(&support.shifted(k, p)).unwrap();
                for e in &monos {
                    let mut t = v.clone();
                    for _ in 0..e[0] {
                        t *= &nr;
                    }
                    for _ in 0..e[1] {
                        t *= &jr;
                    }
                    row.push(t);
                }
            }
            row
        })
        .collect();

    let mut fit = Fit {
        basis: Vec::new(),
        unknowns,
        window_points: window.len(),
        held_out_points: held.len(),
        dropped_spurious: 0,
        tag: String::new(),
    };
    if nullity_mod_p(&rows, unknowns) == Some(0) {
        fit.tag = "no recurrence with this support and degree".into();
        return Ok(fit);
    }
    for v in nullspace_rat(&rows, unknowns) {
        let coeffs: Vec<MPoly> = (0..support.len())
            .map(|k| {
                let mut m = MPoly::zero();
                for (i, e) in monos.iter().enumerate() {
                    let c = v[k * monos.len() + i].clone();
                    if !c.is_zero() {
                        m.terms.insert(*e, c);
                    }
                }
                m
            })
            .collect();
        let rec = Recurrence::new(support.clone(), coeffs)?;
        let ok = held
            .iter()
            .all(|p| rec.residual_at(data, p).is_some_and(|r| r.is_zero()));
        if ok {
            fit.basis.push(rec);
        } else {
            fit.dropped_spurious += 1;
        }
    }
    fit.basis
        .sort_by_key(|r| (r.degree_weight(), r.to_json()));
    fit.tag = if fit.basis.is_empty() {
        "no recurrence with this support and degree".into()
    } else {
        format!("conjectural; verified on {} held-out points", held.len())
    };
    Ok(fit)
}

/// Residual report of one recurrence over one table.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub checked: usize,
    pub failures: Vec<GridPoint>,
    pub vacuous: bool,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluate the recurrence residual at every instantiable point of the
/// table. An empty instantiable set passes vacuously, flagged as such.
pub fn check_recurrence(rec: &Recurrence, data: &DataTable) -> Result<CheckReport, String> {
    if data.is_bi() != rec.support.is_bi() {
        return Err("support arity does not match the table".into());
    }
    let pts = instantiable_points(data, &rec.support);
    let failures: Vec<GridPoint> = pts
        .par_iter()
        .filter(|p| !rec.residual_at(data, p).unwrap().is_zero())
        .cloned()
        .collect();
    Ok(CheckReport {
        checked: pts.len(),
        vacuous: pts.is_empty(),
        failures,
    })
}

/// Target region for unrolling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnrollDomain {
    /// n = from..=to.
    Range { from: i64, to: i64 },
    /// 1 <= n <= n_to, 0 <= j < n.
    Triangle { n_to: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockReason {
    LeadingZero,
    MissingInput,
}

#[derive(Debug, Clone)]
pub struct Unroll {
    pub table: DataTable,
    pub blocked: Vec<(GridPoint, BlockReason)>,
}

/// Extend `initial` over the domain using the recurrence solved for its
/// leading element. Points whose leading coefficient vanishes, or whose
/// inputs are unavailable, are reported as blocked; initial values that
/// contradict a computable value are an error.
pub fn unroll_recurrence(
    rec: &Recurrence,
    initial: &DataTable,
    domain: &UnrollDomain,
) -> Result<Unroll, String> {
    let bi = matches!(domain, UnrollDomain::Triangle { .. });
    if rec.support.is_bi() != bi || initial.is_bi() != bi {
        return Err("domain arity does not match the recurrence or table".into());
    }
    let lead = rec.support.leading()?;
    let targets: Vec<GridPoint> = match *domain {
        UnrollDomain::Range { from, to } => (from..=to).map(GridPoint::N).collect(),
        UnrollDomain::Triangle { n_to } => (1..=n_to)
            .flat_map(|n| (0..n).map(move |j| GridPoint::NJ(n, j)))
            .collect(),
    };
    let mut table = initial.clone();
    let mut blocked = Vec::new();
    for target in targets {
        let known = table.get(&target).cloned();
        // base point at which the recurrence is instantiated
        let base = {
            let (tn, tj) = target.coords();
            match &rec.support {
                ShiftSupport::Uni(v) => GridPoint::N(tn - v[lead]),
                ShiftSupport::Bi(v) => GridPoint::NJ(tn - v[lead].0, tj - v[lead].1),
            }
        };
        let inputs: Option<Vec<Rat>> = (0..rec.support.len())
            .map(|k| {
                if k == lead {
                    Some(Zero::zero())
                } else {
                    table.get(&rec.support.shifted(k, &base)).cloned()
                }
            })
            .collect();
        let Some(inputs) = inputs else {
            if known.is_none() {
                blocked.push((target, BlockReason::MissingInput));
            }
            continue;
        };
        let (bn, bj) = base.coords();
        let args = [
            Rat::from_integer(bn.into()),
            Rat::from_integer(bj.into()),
            rat(1),
        ];
        let lead_val = rec.coeffs[lead]
            .eval(&args)
            .expect("polynomial coefficients evaluate");
        if lead_val.is_zero() {
            if known.is_none() {
                blocked.push((target, BlockReason::LeadingZero));
            }
            continue;
        }
        let mut acc: Rat = Zero::zero();
        for (k, v) in inputs.iter().enumerate() {
            if k == lead {
                continue;
            }
            let c = rec.coeffs[k]
                .eval(&args)
                .expect("polynomial coefficients evaluate");
            acc += c * v;
        }
        let value = -acc / lead_val;
        match known {
            Some(existing) => {
                if existing != value {
                    return Err(format!(
                        "inconsistent initial data at {}: have {existing}, recurrence gives {value}",
                        target.to_text()
                    ));
                }
            }
            None => table.insert(target, value)?,
        }
    }
    Ok(Unroll { table, blocked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pow2_table(n_max: i64) -> DataTable {
        DataTable::from_uni((1..=n_max).map(|n| (n, rat(2).pow(n as i32))))
    }

    #[test]
    fn support_parsing() {
        assert_eq!(
            parse_support("Sj2,Sn,Sj,1").unwrap(),
            ShiftSupport::bi(vec![(0, 2), (1, 0), (0, 1), (0, 0)]).unwrap()
        );
        assert_eq!(
            parse_support("SnSj,Sn,Sj,1").unwrap(),
            ShiftSupport::bi(vec![(1, 1), (1, 0), (0, 1), (0, 0)]).unwrap()
        );
        assert_eq!(
            parse_support("Sn^2,Sn,Sj,1").unwrap(),
            ShiftSupport::bi(vec![(2, 0), (1, 0), (0, 1), (0, 0)]).unwrap()
        );
        assert_eq!(
            parse_support("S2,S,1").unwrap(),
            ShiftSupport::uni(vec![2, 1, 0]).unwrap()
        );
        assert_eq!(
            parse_support("2,1,0").unwrap(),
            ShiftSupport::uni(vec![2, 1, 0]).unwrap()
        );
        assert_eq!(
            parse_support("(1,1),(0,1),(0,0)").unwrap(),
            ShiftSupport::bi(vec![(1, 1), (0, 1), (0, 0)]).unwrap()
        );
        assert!(parse_support("Sx").is_err());
        assert!(parse_support("Sn,S").is_err());
        assert!(ShiftSupport::uni(vec![1, 1]).is_err());
    }

    #[test]
    fn leading_element() {
        let s = ShiftSupport::bi(vec![(1, 1), (1, 0), (0, 1), (0, 0)]).unwrap();
        assert_eq!(s.leading().unwrap(), 0);
        let s = ShiftSupport::bi(vec![(1, 0), (0, 1)]).unwrap();
        assert!(s.leading().is_err());
        let s = ShiftSupport::uni(vec![0, 2, 1]).unwrap();
        assert_eq!(s.leading().unwrap(), 1);
    }

    #[test]
    fn fit_geometric() {
        let data = pow2_table(40);
        let sup = ShiftSupport::uni(vec![1, 0]).unwrap();
        let fit = fit_recurrence(&data, &sup, 0).unwrap();
        assert_eq!(fit.basis.len(), 1);
        let r = &fit.basis[0];
        assert_eq!(r.coeffs[0], MPoly::one());
        assert_eq!(r.coeffs[1], MPoly::constant(rat(-2)));
        assert!(fit.tag.starts_with("conjectural"));
        assert_eq!(fit.dropped_spurious, 0);
        // fitted recurrence holds on a longer table too
        let rep = check_recurrence(r, &pow2_table(100)).unwrap();
        assert!(rep.passed() && rep.checked == 99 && !rep.vacuous);
    }

    #[test]
    fn fit_factorials() {
        let mut v: Rat = One::one();
        let data = DataTable::from_uni((1..=30).map(|n| {
            v *= rat(n);
            (n, v.clone())
        }));
        let sup = ShiftSupport::uni(vec![1, 0]).unwrap();
        let fit = fit_recurrence(&data, &sup, 1).unwrap();
        assert_eq!(fit.basis.len(), 1);
        let r = &fit.basis[0];
        // s(n+1) - (n+1) s(n) = 0
        assert_eq!(r.coeffs[0], MPoly::one());
        let want = MPoly::var(0).add(&MPoly::one()).neg();
        assert_eq!(r.coeffs[1], want);
    }

    #[test]
    fn fit_insufficient_data() {
        let data = pow2_table(12);
        let sup = ShiftSupport::uni(vec![1, 0]).unwrap();
        let err = fit_recurrence(&data, &sup, 0).unwrap_err();
        assert!(err.contains("insufficient data"), "{err}");
    }

    #[test]
    fn fit_finds_nothing_for_doubly_exponential_data() {
        let data = DataTable::from_uni((1..=25).map(|n| (n, rat(2).pow((n * n) as i32))));
        let sup = ShiftSupport::uni(vec![1, 0]).unwrap();
        let fit = fit_recurrence(&data, &sup, 1).unwrap();
        assert!(fit.basis.is_empty());
        assert_eq!(fit.tag, "no recurrence with this support and degree");
    }

    #[test]
    fn unroll_powers_of_two() {
        let rec = Recurrence::new(
            ShiftSupport::uni(vec![1, 0]).unwrap(),
            vec![MPoly::one(), MPoly::constant(rat(-2))],
        )
        .unwrap();
        let mut init = DataTable::new_uni();
        init.insert(GridPoint::N(1), rat(2)).unwrap();
        let out = unroll_recurrence(&rec, &init, &UnrollDomain::Range { from: 1, to: 10 }).unwrap();
        assert!(out.blocked.is_empty());
        let got: Vec<Rat> = (1..=10).map(|n| out.table.get(&GridPoint::N(n)).unwrap().clone()).collect();
        let want: Vec<Rat> = (1..=10).map(|n| rat(2).pow(n as i32)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn unroll_fibonacci_matches_direct() {
        let rec = Recurrence::new(
            ShiftSupport::uni(vec![2, 1, 0]).unwrap(),
            vec![
                MPoly::one(),
                MPoly::constant(rat(-1)),
                MPoly::constant(rat(-1)),
            ],
        )
        .unwrap();
        let mut init = DataTable::new_uni();
        init.insert(GridPoint::N(1), rat(1)).unwrap();
        init.insert(GridPoint::N(2), rat(1)).unwrap();
        let out = unroll_recurrence(&rec, &init, &UnrollDomain::Range { from: 1, to: 20 }).unwrap();
        assert!(out.blocked.is_empty());
        let (mut a, mut b) = (1i64, 1i64);
        for n in 3..=20 {
            let c = a + b;
            a = b;
            b = c;
            assert_eq!(out.table.get(&GridPoint::N(n)).unwrap(), &rat(c));
        }
    }

    #[test]
    fn unroll_reports_blocked_points() {
        // leading coefficient n - 4 vanishes at base 4, so the target 5
        // is blocked and everything past it starves
        let n = MPoly::var(0);
        let rec = Recurrence::new(
            ShiftSupport::uni(vec![1, 0]).unwrap(),
            vec![
                n.sub(&MPoly::constant(rat(4))),
                n.sub(&MPoly::constant(rat(4))).scale(&rat(-2)),
            ],
        )
        .unwrap();
        let mut init = DataTable::new_uni();
        init.insert(GridPoint::N(1), rat(1)).unwrap();
        let out = unroll_recurrence(&rec, &init, &UnrollDomain::Range { from: 1, to: 8 }).unwrap();
        assert_eq!(
            out.blocked,
            vec![
                (GridPoint::N(5), BlockReason::LeadingZero),
                (GridPoint::N(6), BlockReason::MissingInput),
                (GridPoint::N(7), BlockReason::MissingInput),
                (GridPoint::N(8), BlockReason::MissingInput),
            ]
        );
        assert_eq!(out.table.len(), 4);
        assert_eq!(out.table.get(&GridPoint::N(4)).unwrap(), &rat(8));
    }

    #[test]
    fn unroll_rejects_inconsistent_initial_data() {
        let rec = Recurrence::new(
            ShiftSupport::uni(vec![1, 0]).unwrap(),
            vec![MPoly::one(), MPoly::constant(rat(-2))],
        )
        .unwrap();
        let mut init = DataTable::new_uni();
        init.insert(GridPoint::N(1), rat(2)).unwrap();
        init.insert(GridPoint::N(3), rat(9)).unwrap();
        let err =
            unroll_recurrence(&rec, &init, &UnrollDomain::Range { from: 1, to: 5 }).unwrap_err();
        assert!(err.contains("inconsistent initial data"), "{err}");
    }

    #[test]
    fn check_vacuous_domain_is_flagged() {
        let rec = Recurrence::new(
            ShiftSupport::uni(vec![3, 0]).unwrap(),
            vec![MPoly::one(), MPoly::one()],
        )
        .unwrap();
        let data = DataTable::from_uni([(1, rat(1)), (2, rat(5))]);
        let rep = check_recurrence(&rec, &data).unwrap();
        assert!(rep.vacuous && rep.passed() && rep.checked == 0);
    }

    #[test]
    fn check_ratio_recurrence_at_fixed_base() {
        // (a-1)n s(n+2) - (a^2 n - 6an + 2a + n) s(n+1) - 2(a-1)a(2n-1) s(n)
        // at a = 5 with s(n) = 4^(n-1)
        let n = MPoly::var(0);
        let c2 = n.scale(&rat(4));
        let c1 = n.scale(&rat(4)).sub(&MPoly::constant(rat(10)));
        let c0 = n.scale(&rat(-80)).add(&MPoly::constant(rat(40)));
        let rec = Recurrence::new(ShiftSupport::uni(vec![2, 1, 0]).unwrap(), vec![c2, c1, c0])
            .unwrap();
        let data = DataTable::from_uni((1..=30).map(|n| (n, rat(4).pow(n as i32 - 1))));
        let rep = check_recurrence(&rec, &data).unwrap();
        assert!(rep.passed(), "failures at {:?}", rep.failures);
        assert_eq!(rep.checked, 28);
    }

    #[test]
    fn csv_round_trip() {
        let mut t = DataTable::new_bi();
        t.insert(GridPoint::NJ(1, 0), ratio(-3, 7)).unwrap();
        t.insert(GridPoint::NJ(2, 1), rat(4)).unwrap();
        let back = DataTable::from_csv(&t.to_csv()).unwrap();
        assert_eq!(t, back);
        let u = pow2_table(5);
        assert_eq!(DataTable::from_csv(&u.to_csv()).unwrap(), u);
        assert!(DataTable::from_csv("a,b,c\n1,2,3\n").is_err());
    }

    #[test]
    fn recurrence_json_is_stable() {
        let rec = Recurrence::new(
            ShiftSupport::uni(vec![1, 0]).unwrap(),
            vec![MPoly::one(), MPoly::var(0).neg()],
        )
        .unwrap();
        assert_eq!(
            rec.to_json(),
            "{\"support\":[1,0],\"coefficients\":[\"1\",\"-n\"]}"
        );
    }

    #[test]
    fn normalization_clears_content_and_sign() {
        let rec = Recurrence::new(
            ShiftSupport::uni(vec![1, 0]).unwrap(),
            vec![
                MPoly::constant(ratio(-2, 3)),
                MPoly::var(0).scale(&ratio(4, 3)),
            ],
        )
        .unwrap();
        assert_eq!(rec.coeffs[0], MPoly::one());
        assert_eq!(rec.coeffs[1], MPoly::var(0).scale(&rat(-2)));
    }

    #[test]
    fn diagonal_recurrence_reproduces_ones() {
        // the normalization forces c_{n,n-1} = 1; the recurrence t(n+1) = t(n)
        // unrolled from t(1) = 1 must agree with the computed cofactors
        let rec = Recurrence::new(
            ShiftSupport::uni(vec![1, 0]).unwrap(),
            vec![MPoly::one(), MPoly::constant(rat(-1))],
        )
        .unwrap();
        let mut init = DataTable::new_uni();
        init.insert(GridPoint::N(1), rat(1)).unwrap();
        let out =
            unroll_recurrence(&rec, &init, &UnrollDomain::Range { from: 1, to: 15 }).unwrap();
        let table = cofactor_table(&FamilySpec::difrancesco(), 15).unwrap();
        for n in 1..=15i64 {
            assert_eq!(
                out.table.get(&GridPoint::N(n)),
                table.get(&GridPoint::NJ(n, n - 1))
            );
        }
    }

    fn random_poly(rng: &mut ChaCha8Rng, deg: usize, bi: bool) -> MPoly {
        let mut m = MPoly::zero();
        for e in monomials(bi, deg) {
            let c = rng.gen_range(-3i64..=3);
            if c != 0 {
                m.terms.insert(e, rat(c));
            }
        }
        m
    }

    #[test]
    fn fit_round_trips_randomized_recurrences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut uni_cases = 0;
        let mut bi_cases = 0;
        while uni_cases + bi_cases < 20 {
            if uni_cases < 14 {
                // univariate: random coefficients, constant leading term
                let order = rng.gen_range(1..=2i64);
                let shifts: Vec<i64> = (0..=order).rev().collect();
                let sup = ShiftSupport::uni(shifts).unwrap();
                let deg = rng.gen_range(0..=2usize);
                let mut coeffs = vec![MPoly::constant(rat(rng.gen_range(1..=3)))];
                for _ in 0..order {
                    coeffs.push(random_poly(&mut rng, deg, false));
                }
                if coeffs[1..].iter().all(MPoly::is_zero) {
                    continue;
                }
                let planted = Recurrence::new(sup.clone(), coeffs).unwrap();
                let mut init = DataTable::new_uni();
                for n in 1..=order {
                    init.insert(GridPoint::N(n), rat(rng.gen_range(1..=5))).unwrap();
                }
                let len = (sup.len() * (deg + 1) + 22) as i64;
                let out = unroll_recurrence(
                    &planted,
                    &init,
                    &UnrollDomain::Range { from: 1, to: len },
                )
                .unwrap();
                if !out.blocked.is_empty() {
                    continue;
                }
                let fit = fit_recurrence(&out.table, &sup, deg).unwrap();
                assert!(!fit.basis.is_empty(), "lost a planted recurrence");
                assert_eq!(fit.dropped_spurious, 0);
                assert!(in_span(&fit.basis, &planted));
                uni_cases += 1;
            } else {
                // bivariate Pascal-style: s(n+1,j+1) = c1 s(n,j+1) + c2 s(n,j)
                let c1 = rat(rng.gen_range(1..=3));
                let c2 = rat(rng.gen_range(1..=3));
                let sup = ShiftSupport::bi(vec![(1, 1), (0, 1), (0, 0)]).unwrap();
                let planted = Recurrence::new(
                    sup.clone(),
                    vec![
                        MPoly::one(),
                        MPoly::constant(-c1.clone()),
                        MPoly::constant(-c2.clone()),
                    ],
                )
                .unwrap();
                let mut init = DataTable::new_bi();
                for n in 1..=14i64 {
                    init.insert(GridPoint::NJ(n, 0), rat(rng.gen_range(1..=4))).unwrap();
                    if n > 1 {
                        init.insert(GridPoint::NJ(n, n - 1), rat(rng.gen_range(1..=4)))
                            .unwrap();
                    }
                }
                let out =
                    unroll_recurrence(&planted, &init, &UnrollDomain::Triangle { n_to: 14 })
                        .unwrap();
                assert!(out.blocked.is_empty());
                let fit = fit_recurrence(&out.table, &sup, 0).unwrap();
                assert!(!fit.basis.is_empty());
                assert!(in_span(&fit.basis, &planted));
                bi_cases += 1;
            }
        }
        assert_eq!(uni_cases + bi_cases, 20);
    }
}

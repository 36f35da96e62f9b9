//! Truncated formal Laurent series in `x^{1/d}` over `Q(q)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::qscalar::expr::{self, Expr};
use crate::qscalar::QRational;

/// A formal Laurent series `sum c_e x^{e/d}`.
///
/// Exponents are stored in units of `1/d`. When `d > 1` the coefficients live
/// in `Q(p)` with `q = p^d`, so `q^{k e/d}` is the honest power `p^{k e}`.
/// `prec` is the absolute truncation order (exclusive, in the same units);
/// `None` marks an exact finite sum.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    denom: u32,
    coeffs: BTreeMap<i64, QRational>,
    prec: Option<i64>,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl LaurentSeries {
    pub fn zero(denom: u32) -> Self {
        Self::from_map(denom, BTreeMap::new(), None)
    }

    /// `O(x^{prec/d})`.
    pub fn zero_to(denom: u32, prec: i64) -> Self {
        Self::from_map(denom, BTreeMap::new(), Some(prec))
    }

    pub fn one(denom: u32) -> Self {
        Self::constant(denom, QRational::one())
    }

    pub fn constant(denom: u32, c: QRational) -> Self {
        Self::monomial(denom, 0, c)
    }

    /// `c x^{e/d}`.
    pub fn monomial(denom: u32, e: i64, c: QRational) -> Self {
        Self::from_map(denom, BTreeMap::from([(e, c)]), None)
    }

    /// The series `x`, i.e. `x^{d/d}`.
    pub fn x(denom: u32) -> Self {
        Self::monomial(denom, i64::from(denom), QRational::one())
    }

    pub fn from_terms<I>(denom: u32, terms: I, prec: Option<i64>) -> Self
    where
        I: IntoIterator<Item = (i64, QRational)>,
    {
        let mut map: BTreeMap<i64, QRational> = BTreeMap::new();
        for (e, c) in terms {
            let slot = map.entry(e).or_default();
            *slot = &*slot + &c;
        }
        Self::from_map(denom, map, prec)
    }

    fn from_map(denom: u32, mut coeffs: BTreeMap<i64, QRational>, prec: Option<i64>) -> Self {
        assert!(denom > 0, "ramification index must be positive");
        coeffs.retain(|&e, c| !c.is_zero() && prec.is_none_or(|p| e < p));
        LaurentSeries { denom, coeffs, prec }
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Lowest exponent carrying a known nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Valuation, or the truncation order for a series known to be zero so far.
    fn effective_valuation(&self) -> Option<i64> {
        self.valuation().or(self.prec)
    }

    pub fn coeff(&self, e: i64) -> QRational {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    pub fn leading_coeff(&self) -> Option<&QRational> {
        self.coeffs.values().next()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &QRational)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    /// No nonzero coefficient is known.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_zero() && self.is_exact()
    }

    /// True when the series is known to vanish below `bound`.
    pub fn vanishes_below(&self, bound: i64) -> bool {
        self.prec.is_none_or(|p| p >= bound) && self.valuation().is_none_or(|v| v >= bound)
    }

    /// Forgets every coefficient at or above `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        Self::from_map(self.denom, self.coeffs.clone(), min_prec(self.prec, Some(prec)))
    }

    /// Rewrites over the ramification index `d`, a multiple of the current one.
    pub fn lift(&self, d: u32) -> Result<Self> {
        if !d.is_multiple_of(self.denom) {
            return Err(Error::domain(format!("cannot lift denominator {} to {d}", self.denom)));
        }
        let r = i64::from(d / self.denom);
        if r == 1 {
            return Ok(self.clone());
        }
        let coeffs = self.coeffs.iter().map(|(&e, c)| (e * r, c.substitute_power(r))).collect();
        Ok(Self::from_map(d, coeffs, self.prec.map(|p| p * r)))
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let d = self.denom.lcm(&other.denom);
        (self.lift(d).expect("lcm is a multiple"), other.lift(d).expect("lcm is a multiple"))
    }

    pub fn scale(&self, c: &QRational) -> Self {
        let coeffs = self.coeffs.iter().map(|(&e, x)| (e, x * c)).collect();
        Self::from_map(self.denom, coeffs, self.prec)
    }

    /// Multiplies by `x^{e/d}`.
    pub fn shift(&self, e: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|(&k, c)| (k + e, c.clone())).collect();
        Self::from_map(self.denom, coeffs, self.prec.map(|p| p + e))
    }

    /// `f(x) -> f(q^k x)`.
    pub fn scale_q(&self, k: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|(&e, c)| (e, c.shift(k * e))).collect();
        Self::from_map(self.denom, coeffs, self.prec)
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        if self.denom != other.denom {
            let (a, b) = self.aligned(other);
            return a.add_impl(&b, negate);
        }
        let mut coeffs = self.coeffs.clone();
        for (&e, c) in &other.coeffs {
            let slot = coeffs.entry(e).or_default();
            *slot = if negate { &*slot - c } else { &*slot + c };
        }
        Self::from_map(self.denom, coeffs, min_prec(self.prec, other.prec))
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.denom != other.denom {
            let (a, b) = self.aligned(other);
            return a.mul_impl(&b);
        }
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(self.denom);
        }
        let prec = match (self.effective_valuation(), other.effective_valuation()) {
            (Some(va), Some(vb)) => min_prec(self.prec.map(|p| p + vb), other.prec.map(|p| p + va)),
            _ => unreachable!("nonzero or truncated series have an effective valuation"),
        };
        // collect the products per exponent and sum each group at once
        let mut groups: BTreeMap<i64, Vec<QRational>> = BTreeMap::new();
        for (&ea, ca) in &self.coeffs {
            for (&eb, cb) in &other.coeffs {
                let e = ea + eb;
                if prec.is_some_and(|p| e >= p) {
                    break;
                }
                groups.entry(e).or_default().push(ca * cb);
            }
        }
        let coeffs = groups.into_iter().map(|(e, g)| (e, g.into_iter().sum())).collect();
        Self::from_map(self.denom, coeffs, prec)
    }

    /// Multiplicative inverse. Exact inputs that are not monomials get
    /// truncated at `cap`.
    pub fn inv(&self, cap: i64) -> Result<Self> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::domain("inverse of a series with no known nonzero coefficient"))?;
        let u0 = self.coeffs[&v].clone();
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(Self::monomial(self.denom, -v, u0.inv()?));
        }
        // 1/f = x^-v (1/u) and u is known to relative order prec - v
        let prec = min_prec(self.prec.map(|p| p - 2 * v), Some(cap)).expect("cap is finite");
        let u0_inv = u0.inv()?;
        let unit: Vec<(i64, &QRational)> = self.coeffs.iter().skip(1).map(|(&e, c)| (e - v, c)).collect();
        let mut out: Vec<QRational> = Vec::new();
        for n in 0..(prec + v).max(0) {
            let b = if n == 0 {
                u0_inv.clone()
            } else {
                let s: QRational = unit
                    .iter()
                    .take_while(|(k, _)| *k <= n)
                    .map(|(k, c)| *c * &out[(n - k) as usize])
                    .sum();
                -(&s * &u0_inv)
            };
            out.push(b);
        }
        let terms = out.into_iter().enumerate().map(|(n, c)| (n as i64 - v, c));
        Ok(Self::from_terms(self.denom, terms, Some(prec)))
    }

    /// Logarithm of a series `1 + O(x)`.
    pub fn log(&self, cap: i64) -> Result<Self> {
        if self.valuation() != Some(0) || !self.coeffs[&0].is_one() {
            return Err(Error::domain(format!("log needs constant term 1 and valuation 0, got {self}")));
        }
        let prec = min_prec(self.prec, Some(cap)).expect("cap is finite");
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(Self::zero(self.denom));
        }
        // n L_n = n a_n - sum_{k<n} k L_k a_{n-k}
        let mut out: Vec<QRational> = vec![QRational::zero()];
        for n in 1..prec.max(1) {
            let mut s = QRational::from(n) * self.coeff(n);
            for (k, lk) in out.iter().enumerate().skip(1) {
                if lk.is_zero() {
                    continue;
                }
                let a = self.coeffs.get(&(n - k as i64));
                if let Some(a) = a {
                    s = &s - &(&(lk * a) * &QRational::from(k as i64));
                }
            }
            out.push(&s * &QRational::from(n).inv()?);
        }
        let terms = out.into_iter().enumerate().map(|(n, c)| (n as i64, c));
        Ok(Self::from_terms(self.denom, terms, Some(prec)))
    }

    /// Exponential of a series with only positive exponents.
    pub fn exp(&self, cap: i64) -> Result<Self> {
        if self.valuation().is_some_and(|v| v <= 0) {
            return Err(Error::domain(format!("exp needs a series without constant or polar part, got {self}")));
        }
        if self.is_exact_zero() {
            return Ok(Self::one(self.denom));
        }
        let prec = min_prec(self.prec, Some(cap)).expect("cap is finite");
        // n e_n = sum_{k=1}^n k g_k e_{n-k}
        let g: Vec<(i64, QRational)> = self.coeffs.iter().map(|(&k, c)| (k, c * &QRational::from(k))).collect();
        let mut out: Vec<QRational> = vec![QRational::one()];
        for n in 1..prec.max(1) {
            let s: QRational = g
                .iter()
                .take_while(|(k, _)| *k <= n)
                .map(|(k, c)| c * &out[(n - k) as usize])
                .sum();
            out.push(&s * &QRational::from(n).inv()?);
        }
        let terms = out.into_iter().enumerate().map(|(n, c)| (n as i64, c));
        Ok(Self::from_terms(self.denom, terms, Some(prec)))
    }

    /// Integer power; negative exponents invert with truncation `cap`.
    pub fn pow(&self, k: i64, cap: i64) -> Result<Self> {
        let base = if k < 0 { self.inv(cap)? } else { self.clone() };
        let mut acc = Self::one(self.denom);
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Parses the text format; see [`LaurentSeries::parse_with_denom`].
    /// A leading `@denom d` selects the ramification index.
    pub fn parse(text: &str, cap: i64) -> Result<Self> {
        let (d, body) = split_denom(text)?;
        Self::parse_with_denom(body, d, cap)
    }

    /// Evaluates an expression in `x`, `q`, `O(x^m)`, `exp(..)` and `log(..)`.
    /// For `d > 1` the name `x` means `x^{1/d}` and `p` is `q^{1/d}`.
    /// Division and negative powers truncate at `cap`.
    pub fn parse_with_denom(text: &str, d: u32, cap: i64) -> Result<Self> {
        eval_series(&expr::parse(text)?, d, cap)
    }
}

/// Splits an optional `@denom d` prefix off a text value.
pub(crate) fn split_denom(text: &str) -> Result<(u32, &str)> {
    let trimmed = text.trim_start();
    let Some(rest) = trimmed.strip_prefix("@denom") else {
        return Ok((1, text));
    };
    let rest = rest.trim_start();
    let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
    let d: u32 = rest[..end]
        .parse()
        .ok()
        .filter(|&d| d > 0)
        .ok_or_else(|| parse_err("expected a positive integer after @denom"))?;
    let body = rest[end..].trim_start();
    Ok((d, body.strip_prefix(':').unwrap_or(body)))
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse { pos: 0, msg: msg.into() }
}

pub(crate) fn eval_series(e: &Expr, d: u32, cap: i64) -> Result<LaurentSeries> {
    let rec = |e: &Expr| eval_series(e, d, cap);
    Ok(match e {
        Expr::Int(n) => LaurentSeries::constant(d, QRational::from(n.clone())),
        Expr::Var(v) if v == "x" => LaurentSeries::monomial(d, 1, QRational::one()),
        Expr::Var(v) if v == "q" => LaurentSeries::constant(d, QRational::q_pow(i64::from(d))),
        Expr::Var(v) if v == "p" && d > 1 => LaurentSeries::constant(d, QRational::q_pow(1)),
        Expr::Var(v) => return Err(parse_err(format!("unknown variable {v}"))),
        Expr::Call(f, arg) if f == "O" => {
            let a = rec(arg)?;
            let m = match a.terms().next() {
                Some((m, c)) if a.coeffs.len() == 1 && c.is_one() && a.is_exact() => m,
                _ => return Err(parse_err("O(..) expects a power of x")),
            };
            LaurentSeries::zero_to(d, m)
        }
        Expr::Call(f, arg) if f == "exp" => rec(arg)?.exp(cap)?,
        Expr::Call(f, arg) if f == "log" => rec(arg)?.log(cap)?,
        Expr::Call(f, _) => return Err(parse_err(format!("unknown function {f}"))),
        Expr::Neg(a) => -&rec(a)?,
        Expr::Add(a, b) => &rec(a)? + &rec(b)?,
        Expr::Sub(a, b) => &rec(a)? - &rec(b)?,
        Expr::Mul(a, b) => &rec(a)? * &rec(b)?,
        Expr::Div(a, b) => &rec(a)? * &rec(b)?.inv(cap)?,
        Expr::Pow(a, k) => rec(a)?.pow(*k, cap)?,
    })
}

/// Whether a printed scalar needs parentheses inside a product.
fn is_compound(s: &str) -> bool {
    let b = s.as_bytes();
    (1..b.len()).any(|i| (b[i] == b'+' || b[i] == b'-') && b[i - 1] != b'^') || s.contains('/')
}

fn fmt_term(c: &QRational, var: &str, e: i64, first: bool) -> String {
    let s = c.fmt_var(var);
    let (neg, mag) = match s.strip_prefix('-') {
        Some(rest) if !is_compound(rest) || rest.starts_with('(') => (true, rest.to_string()),
        _ => (false, s.clone()),
    };
    let mag = if is_compound(&mag) { format!("({mag})") } else { mag };
    let mono = match e {
        0 => mag,
        _ => {
            let xe = if e == 1 { "x".to_string() } else { format!("x^{e}") };
            if mag == "1" {
                xe
            } else {
                format!("{mag}*{xe}")
            }
        }
    };
    match (first, neg) {
        (true, true) => format!("-{mono}"),
        (true, false) => mono,
        (false, true) => format!(" - {mono}"),
        (false, false) => format!(" + {mono}"),
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom > 1 {
            write!(f, "@denom {} ", self.denom)?;
        }
        let var = if self.denom > 1 { "p" } else { "q" };
        let v = match self.valuation() {
            None => {
                return match self.prec {
                    None => f.write_str("0"),
                    Some(p) => write!(f, "O(x^{p})"),
                }
            }
            Some(v) => v,
        };
        let mut body = String::new();
        for (k, (e, c)) in self.coeffs.iter().enumerate() {
            body.push_str(&fmt_term(c, var, e - v, k == 0));
        }
        if let Some(p) = self.prec {
            body.push_str(&format!(" + O(x^{})", p - v));
        }
        if v == 0 {
            f.write_str(&body)
        } else if self.coeffs.len() == 1 && self.prec.is_none() {
            f.write_str(&fmt_term(&self.coeffs[&v], var, v, true))
        } else {
            write!(f, "x^{v} * ({body})")
        }
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentSeries({self})")
    }
}

impl Add<&LaurentSeries> for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.add_impl(rhs, false)
    }
}

impl Sub<&LaurentSeries> for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.add_impl(rhs, true)
    }
}

impl Mul<&LaurentSeries> for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.mul_impl(rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.scale(&QRational::from(-1))
    }
}

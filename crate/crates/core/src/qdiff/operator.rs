//! The algebra `D_q` of q-difference operators `sum a_j(x) y^j`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde_json::{Map, Value};

use super::series::{eval_series, split_denom, LaurentSeries};
use crate::error::{Error, Result};
use crate::qscalar::expr::{self, Expr};
use crate::qscalar::QRational;

/// `sum_j a_j(x) y^j` with `y f(x) = f(q^-1 x) y`.
///
/// Exact zero coefficients are dropped. A coefficient that is zero only up
/// to its truncation is kept, since it still records how far it is known.
#[derive(Clone, PartialEq, Eq)]
pub struct QDiffOperator {
    denom: u32,
    terms: BTreeMap<i64, LaurentSeries>,
}

impl QDiffOperator {
    pub fn zero(denom: u32) -> Self {
        QDiffOperator { denom, terms: BTreeMap::new() }
    }

    pub fn one(denom: u32) -> Self {
        Self::y_pow(denom, 0)
    }

    pub fn y_pow(denom: u32, j: i64) -> Self {
        Self::term(j, LaurentSeries::one(denom))
    }

    /// `a(x) y^j`.
    pub fn term(j: i64, a: LaurentSeries) -> Self {
        Self::from_terms(a.denom(), [(j, a)])
    }

    pub fn from_series(a: LaurentSeries) -> Self {
        Self::term(0, a)
    }

    /// Builds from `(j, a_j)` pairs; repeated powers add up and every
    /// coefficient is lifted to a common ramification index.
    pub fn from_terms<I: IntoIterator<Item = (i64, LaurentSeries)>>(denom: u32, terms: I) -> Self {
        let terms: Vec<(i64, LaurentSeries)> = terms.into_iter().collect();
        let d = terms.iter().fold(denom, |d, (_, a)| d.lcm(&a.denom()));
        let mut map: BTreeMap<i64, LaurentSeries> = BTreeMap::new();
        for (j, a) in terms {
            let a = a.lift(d).expect("lcm is a multiple");
            let sum = match map.remove(&j) {
                Some(b) => &b + &a,
                None => a,
            };
            map.insert(j, sum);
        }
        map.retain(|_, a| !a.is_exact_zero());
        QDiffOperator { denom: d, terms: map }
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    pub fn lift(&self, d: u32) -> Result<Self> {
        let terms = self.terms.iter().map(|(&j, a)| Ok((j, a.lift(d)?))).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(d, terms))
    }

    pub fn coeff(&self, j: i64) -> Option<&LaurentSeries> {
        self.terms.get(&j)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &LaurentSeries)> {
        self.terms.iter().map(|(&j, a)| (j, a))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest and largest `j` whose coefficient has a known nonzero term.
    pub fn y_range(&self) -> Option<(i64, i64)> {
        let mut js = self.terms.iter().filter(|(_, a)| !a.is_zero()).map(|(&j, _)| j);
        let lo = js.next()?;
        Some((lo, js.next_back().unwrap_or(lo)))
    }

    /// Left multiplication by a series.
    pub fn scale_left(&self, s: &LaurentSeries) -> Self {
        Self::from_terms(self.denom, self.terms.iter().map(|(&j, a)| (j, s * a)))
    }

    fn mul_impl(&self, other: &Self) -> Self {
        // (a y^i)(b y^j) = a b(q^-i x) y^{i+j}
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (&i, a) in &self.terms {
            for (&j, b) in &other.terms {
                out.push((i + j, a * &b.scale_q(-i)));
            }
        }
        Self::from_terms(self.denom.lcm(&other.denom), out)
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let rhs = other.terms.iter().map(|(&j, b)| (j, if negate { -b } else { b.clone() }));
        let all: Vec<_> = self.terms.iter().map(|(&j, a)| (j, a.clone())).chain(rhs).collect();
        Self::from_terms(self.denom.lcm(&other.denom), all)
    }

    /// `(P f)(x) = sum_j a_j(x) f(q^-j x)`.
    pub fn apply(&self, f: &LaurentSeries) -> LaurentSeries {
        self.terms
            .iter()
            .fold(LaurentSeries::zero(f.denom().lcm(&self.denom)), |acc, (&j, a)| &acc + &(a * &f.scale_q(-j)))
    }

    /// True when `self - other` has every coefficient known to vanish below `bound`.
    pub fn agrees_below(&self, other: &Self, bound: i64) -> bool {
        let diff = self - other;
        diff.terms.values().all(|a| a.vanishes_below(bound))
    }

    /// The inverse of a unit `c(x) y^j`.
    pub fn unit_inverse(&self, cap: i64) -> Result<Self> {
        match (self.terms.len(), self.terms.iter().next()) {
            (1, Some((&j, c))) => Ok(Self::term(-j, c.inv(cap)?.scale_q(j))),
            _ => Err(Error::NotUnit),
        }
    }

    /// Parses an expression in `x`, `y`, `q`, `O(..)`, `exp`, `log`, with an
    /// optional leading `@denom d` as for series. Products keep their written
    /// order. Division is allowed by units only.
    pub fn parse(text: &str, cap: i64) -> Result<Self> {
        let (d, body) = split_denom(text)?;
        Self::parse_with_denom(body, d, cap)
    }

    pub fn parse_with_denom(text: &str, denom: u32, cap: i64) -> Result<Self> {
        eval_operator(&expr::parse(text)?, denom, cap)
    }

    /// `{"j": "series", ...}`.
    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> = self.terms.iter().map(|(j, a)| (j.to_string(), Value::String(a.to_string()))).collect();
        Value::Object(map)
    }

    pub fn from_json(v: &Value, cap: i64) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse { pos: 0, msg: "operator must be a JSON object".into() })?;
        let mut terms = Vec::with_capacity(obj.len());
        for (k, s) in obj {
            let j: i64 = k.parse().map_err(|_| Error::Parse { pos: 0, msg: format!("bad power of y: {k:?}") })?;
            let s = s.as_str().ok_or_else(|| Error::Parse { pos: 0, msg: format!("coefficient of y^{j} must be a string") })?;
            terms.push((j, LaurentSeries::parse(s, cap)?));
        }
        Ok(Self::from_terms(1, terms))
    }
}

fn eval_operator(e: &Expr, d: u32, cap: i64) -> Result<QDiffOperator> {
    let rec = |e: &Expr| eval_operator(e, d, cap);
    Ok(match e {
        Expr::Var(v) if v == "y" => QDiffOperator::y_pow(d, 1),
        Expr::Int(_) | Expr::Var(_) => QDiffOperator::from_series(eval_series(e, d, cap)?),
        Expr::Call(_, _) => QDiffOperator::from_series(eval_series(e, d, cap)?),
        Expr::Neg(a) => -&rec(a)?,
        Expr::Add(a, b) => &rec(a)? + &rec(b)?,
        Expr::Sub(a, b) => &rec(a)? - &rec(b)?,
        Expr::Mul(a, b) => &rec(a)? * &rec(b)?,
        Expr::Div(a, b) => &rec(a)? * &rec(b)?.unit_inverse(cap)?,
        Expr::Pow(a, k) => {
            let base = rec(a)?;
            let base = if *k < 0 { base.unit_inverse(cap)? } else { base };
            (0..k.unsigned_abs()).fold(QDiffOperator::one(d), |acc, _| &acc * &base)
        }
    })
}

/// Result of writing `A = unit * P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicNormalization {
    /// `c(x) y^{k0}`.
    pub unit: QDiffOperator,
    /// Monic in `y` with invertible constant term.
    pub monic: QDiffOperator,
}

/// Splits `A = c(x) y^{k0} P` with `P = y^n + ... + a_n`, `a_n != 0`.
pub fn monic_normalize(a: &QDiffOperator, cap: i64) -> Result<MonicNormalization> {
    let (lo, hi) = a.y_range().ok_or_else(|| Error::domain("cannot normalize the zero operator"))?;
    let lead = a.coeff(hi).expect("in range");
    let unit = QDiffOperator::term(lo, lead.clone());
    // P = y^-lo c^-1 A, and y^-lo g(x) = g(q^lo x) y^-lo
    let lead_inv = lead.inv(cap)?;
    let terms = a
        .terms()
        .filter(|(j, _)| (lo..=hi).contains(j))
        .map(|(j, aj)| (j - lo, if j == hi { LaurentSeries::one(a.denom()) } else { (aj * &lead_inv).scale_q(lo) }));
    let monic = QDiffOperator::from_terms(a.denom(), terms);
    Ok(MonicNormalization { unit, monic })
}

impl fmt::Display for QDiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&j, a)| {
                let one = a == &LaurentSeries::one(a.denom());
                let coeff = a.to_string();
                let coeff = coeff.strip_prefix(&format!("@denom {} ", self.denom)).unwrap_or(&coeff).to_string();
                match (j, one) {
                    (0, _) => format!("({coeff})"),
                    (1, true) => "y".to_string(),
                    (_, true) => format!("y^{j}"),
                    (1, false) => format!("({coeff})*y"),
                    _ => format!("({coeff})*y^{j}"),
                }
            })
            .collect();
        if self.denom > 1 {
            write!(f, "@denom {} ", self.denom)?;
        }
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for QDiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QDiffOperator({self})")
    }
}

impl Add<&QDiffOperator> for &QDiffOperator {
    type Output = QDiffOperator;
    fn add(self, rhs: &QDiffOperator) -> QDiffOperator {
        self.add_impl(rhs, false)
    }
}

impl Sub<&QDiffOperator> for &QDiffOperator {
    type Output = QDiffOperator;
    fn sub(self, rhs: &QDiffOperator) -> QDiffOperator {
        self.add_impl(rhs, true)
    }
}

impl Mul<&QDiffOperator> for &QDiffOperator {
    type Output = QDiffOperator;
    fn mul(self, rhs: &QDiffOperator) -> QDiffOperator {
        self.mul_impl(rhs)
    }
}

impl Neg for &QDiffOperator {
    type Output = QDiffOperator;
    fn neg(self) -> QDiffOperator {
        self.scale_left(&LaurentSeries::constant(self.denom, QRational::from(-1)))
    }
}


use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde_json::{json, Value};

use super::{AlgebraKind, Presentation};
use crate::error::{Error, Result};
use crate::qscalar::expr::{self, Expr};
use crate::qscalar::Scalar;

/// A normal-ordered element `sum_alpha c_alpha x^alpha`.
#[derive(Clone)]
pub struct AlgebraElement {
    pres: Arc<Presentation>,
    terms: BTreeMap<Vec<i64>, Scalar>,
}

fn same(a: &Arc<Presentation>, b: &Arc<Presentation>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl AlgebraElement {
    pub fn zero(pres: &Arc<Presentation>) -> Self {
        AlgebraElement { pres: pres.clone(), terms: BTreeMap::new() }
    }

    pub fn one(pres: &Arc<Presentation>) -> Self {
        Self::scalar(pres, Scalar::one(pres.mode())).expect("mode matches")
    }

    pub fn scalar(pres: &Arc<Presentation>, c: Scalar) -> Result<Self> {
        Self::monomial(pres, vec![0; pres.n()], c)
    }

    /// `c * x^alpha`.
    pub fn monomial(pres: &Arc<Presentation>, alpha: Vec<i64>, c: Scalar) -> Result<Self> {
        check_exponent(pres, &alpha)?;
        if c.mode() != pres.mode() {
            return Err(Error::ModeMismatch(c.mode().to_string(), pres.mode().to_string()));
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(alpha, c);
        }
        Ok(AlgebraElement { pres: pres.clone(), terms })
    }

    pub fn generator(pres: &Arc<Presentation>, i: usize) -> Self {
        let mut alpha = vec![0; pres.n()];
        alpha[i] = 1;
        Self::monomial(pres, alpha, Scalar::one(pres.mode())).expect("valid generator")
    }

    pub fn from_terms<I>(pres: &Arc<Presentation>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Scalar)>,
    {
        let mut out = Self::zero(pres);
        for (alpha, c) in terms {
            out.add_term(alpha, c)?;
        }
        Ok(out)
    }

    fn add_term(&mut self, alpha: Vec<i64>, c: Scalar) -> Result<()> {
        check_exponent(&self.pres, &alpha)?;
        if c.mode() != self.pres.mode() {
            return Err(Error::ModeMismatch(c.mode().to_string(), self.pres.mode().to_string()));
        }
        insert(&mut self.terms, alpha, c);
        Ok(())
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &Scalar)> {
        self.terms.iter().map(|(a, c)| (a.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &[i64]) -> Scalar {
        self.terms.get(alpha).cloned().unwrap_or_else(|| Scalar::zero(self.pres.mode()))
    }

    /// `Some((alpha, c))` when the element is `c * x^alpha`.
    pub fn single_term(&self) -> Option<(&[i64], &Scalar)> {
        if self.terms.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if same(&self.pres, &other.pres) {
            Ok(())
        } else {
            Err(Error::domain(format!("presentation mismatch: {:?} vs {:?}", self.pres, other.pres)))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for (a, c) in &other.terms {
            insert(&mut terms, a.clone(), c.clone());
        }
        Ok(AlgebraElement { pres: self.pres.clone(), terms })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Scalar) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(a, x)| (a.clone(), x * c))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        AlgebraElement { pres: self.pres.clone(), terms }
    }

    /// Exact product, reordering `x^a x^b = q^{twist(a,b)} x^{a+b}`.
    pub fn normal_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut terms = BTreeMap::new();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                let e = self.pres.twist(a, b)?;
                let sum = add_exponents(a, b)?;
                insert(&mut terms, sum, (c * d).shift(e));
            }
        }
        Ok(AlgebraElement { pres: self.pres.clone(), terms })
    }

    /// The two-sided inverse when the element is a unit: a nonzero scalar
    /// times a Laurent monomial (only `alpha = 0` in the polynomial algebra).
    pub fn inverse(&self) -> Option<Self> {
        let (alpha, c) = self.single_term()?;
        if self.pres.kind() == AlgebraKind::Polynomial && alpha.iter().any(|&e| e != 0) {
            return None;
        }
        let neg: Vec<i64> = alpha.iter().map(|e| -e).collect();
        // (c x^a)(c' x^-a) = c c' q^{twist(a,-a)}
        let e = self.pres.twist(alpha, &neg).ok()?;
        let inv = c.inv().ok()?.shift(-e);
        Self::monomial(&self.pres, neg, inv).ok()
    }

    pub fn is_unit(&self) -> bool {
        self.inverse().is_some()
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse().ok_or(Error::NotUnit)? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(&self.pres);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.normal_mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.normal_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Evaluates the algebra map sending generator `i` to `images[i]`:
    /// `c x^alpha` goes to `c * images[0]^alpha_0 * ... * images[n-1]^alpha_{n-1}`.
    pub fn substitute(&self, images: &[AlgebraElement]) -> Result<AlgebraElement> {
        if images.len() != self.pres.n() {
            return Err(Error::dim(format!("expected {} images", self.pres.n())));
        }
        let target = images.first().map(|g| g.pres.clone()).unwrap_or_else(|| self.pres.clone());
        if let Some(bad) = images.iter().find(|g| !same(&g.pres, &target)) {
            return Err(Error::domain(format!("images live in different algebras: {:?}", bad.pres)));
        }
        let mut out = AlgebraElement::zero(&target);
        for (alpha, c) in &self.terms {
            let coeff = c.to_mode(target.mode())?;
            let mut term = AlgebraElement::scalar(&target, coeff)?;
            for (img, &e) in images.iter().zip(alpha) {
                if e != 0 {
                    term = term.normal_mul(&img.pow(e)?)?;
                }
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    pub fn parse(pres: &Arc<Presentation>, text: &str) -> Result<Self> {
        let e = expr::parse(text)?;
        eval(pres, &e)
    }

    /// `{"terms": [{"alpha": [..], "coeff": ".."}, ..]}`.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(a, c)| json!({ "alpha": a, "coeff": c.to_string() }))
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(pres: &Arc<Presentation>, v: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::Parse { pos: 0, msg: msg.to_string() };
        let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("expected a terms array"))?;
        let mut out = Self::zero(pres);
        for t in terms {
            let alpha: Vec<i64> = t
                .get("alpha")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("term without alpha"))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| bad("alpha entries must be integers")))
                .collect::<Result<_>>()?;
            let coeff = t.get("coeff").and_then(Value::as_str).ok_or_else(|| bad("term without coeff"))?;
            if alpha.len() != pres.n() {
                return Err(Error::dim(format!("exponent vector of length {} for {} generators", alpha.len(), pres.n())));
            }
            out.add_term(alpha, Scalar::parse(pres.mode(), coeff)?)?;
        }
        Ok(out)
    }

    fn monomial_text(&self, alpha: &[i64]) -> String {
        let parts: Vec<String> = alpha
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| {
                let name = self.pres.generator_name(i);
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        parts.join("*")
    }
}

fn check_exponent(pres: &Presentation, alpha: &[i64]) -> Result<()> {
    if alpha.len() != pres.n() {
        return Err(Error::dim(format!("exponent vector of length {} for {} generators", alpha.len(), pres.n())));
    }
    if pres.kind() == AlgebraKind::Polynomial && alpha.iter().any(|&e| e < 0) {
        return Err(Error::NegativeExponent);
    }
    Ok(())
}

fn add_exponents(a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_add(*y).ok_or_else(|| Error::Overflow("exponent".into())))
        .collect()
}

fn insert(terms: &mut BTreeMap<Vec<i64>, Scalar>, alpha: Vec<i64>, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match terms.entry(alpha) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

fn eval(pres: &Arc<Presentation>, e: &Expr) -> Result<AlgebraElement> {
    let parse_err = |msg: String| Error::Parse { pos: 0, msg };
    Ok(match e {
        Expr::Int(n) => AlgebraElement::scalar(pres, Scalar::from_rational(pres.mode(), n.clone().into()))?,
        Expr::Var(v) if v == "q" => AlgebraElement::scalar(pres, Scalar::q_pow(pres.mode(), 1))?,
        Expr::Var(v) => match pres.generator_index(v) {
            Some(i) => AlgebraElement::generator(pres, i),
            None => return Err(parse_err(format!("unknown generator {v}"))),
        },
        Expr::Call(f, _) => return Err(parse_err(format!("unknown function {f}"))),
        Expr::Neg(a) => -&eval(pres, a)?,
        Expr::Add(a, b) => eval(pres, a)?.try_add(&eval(pres, b)?)?,
        Expr::Sub(a, b) => eval(pres, a)?.try_sub(&eval(pres, b)?)?,
        Expr::Mul(a, b) => eval(pres, a)?.normal_mul(&eval(pres, b)?)?,
        Expr::Div(a, b) => {
            let d = eval(pres, b)?;
            let inv = d.inverse().ok_or_else(|| parse_err(format!("cannot divide by the non-unit {d}")))?;
            eval(pres, a)?.normal_mul(&inv)?
        }
        Expr::Pow(a, k) => eval(pres, a)?.pow(*k)?,
    })
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same(&self.pres, &other.pres) && self.terms == other.terms
    }
}

impl Eq for AlgebraElement {}

fn needs_parens(s: &str) -> bool {
    s.chars().skip(1).any(|c| matches!(c, '+' | '-' | '/'))
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (alpha, c)) in self.terms.iter().enumerate() {
            let mono = self.monomial_text(alpha);
            let mut coeff = c.to_string();
            let negative = coeff.starts_with('-') && !needs_parens(&coeff);
            if negative {
                coeff.remove(0);
            }
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let coeff = if needs_parens(&coeff) { format!("({coeff})") } else { coeff };
            match (mono.is_empty(), coeff == "1") {
                (true, _) => f.write_str(&coeff)?,
                (false, true) => f.write_str(&mono)?,
                (false, false) => write!(f, "{coeff}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraElement({self})")
    }
}

/// # Panics
/// When the operands live in different algebras.
impl Add<&AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_add(rhs).expect("presentation mismatch")
    }
}

/// # Panics
/// When the operands live in different algebras.
impl Sub<&AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_sub(rhs).expect("presentation mismatch")
    }
}

/// # Panics
/// When the operands live in different algebras or exponents overflow.
impl Mul<&AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.normal_mul(rhs).expect("presentation mismatch")
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        let terms = self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect();
        AlgebraElement { pres: self.pres.clone(), terms }
    }
}

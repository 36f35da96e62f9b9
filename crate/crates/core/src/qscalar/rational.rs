//! Elements of the rational function field `Q(q)`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::laurent::{forward_owned, QLaurent};
use super::MonomialScalar;
use crate::error::{Error, Result};

/// A reduced fraction `num / den` in `Q(q)`.
///
/// Canonical form: `den` is a monic polynomial with nonzero constant term and
/// all powers of `q` live in `num`; `num` and `den` share no common factor.
/// Equal field elements therefore have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QRational {
    num: QLaurent,
    den: QLaurent,
}

impl QRational {
    pub fn zero() -> Self {
        QRational { num: QLaurent::zero(), den: QLaurent::one() }
    }

    pub fn one() -> Self {
        Self::from_laurent(QLaurent::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_laurent(QLaurent::from_int(n))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_laurent(QLaurent::constant(c))
    }

    pub fn q_pow(e: i64) -> Self {
        Self::from_laurent(QLaurent::q_pow(e))
    }

    pub fn monomial(c: BigRational, e: i64) -> Self {
        Self::from_laurent(QLaurent::monomial(c, e))
    }

    pub fn from_laurent(num: QLaurent) -> Self {
        QRational { num, den: QLaurent::one() }
    }

    /// `num / den`, reduced to canonical form.
    pub fn new(num: QLaurent, den: QLaurent) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.poly_gcd(&den);
        if g.is_one() || num.is_zero() {
            Ok(Self::from_coprime(num, den))
        } else {
            let n = num.div_exact(&g).expect("gcd divides numerator");
            let d = den.div_exact(&g).expect("gcd divides denominator");
            Ok(Self::from_coprime(n, d))
        }
    }

    /// Normalizes a fraction whose polynomial parts are already coprime.
    fn from_coprime(num: QLaurent, den: QLaurent) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let low = den.valuation().expect("nonzero denominator");
        let lead = den.leading_coeff();
        let den = den.shift(-low).monic();
        let num = num.shift(-low).scale(&lead.recip());
        QRational { num, den }
    }

    pub fn numer(&self) -> &QLaurent {
        &self.num
    }

    pub fn denom(&self) -> &QLaurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_laurent(&self) -> Option<&QLaurent> {
        self.is_laurent().then_some(&self.num)
    }

    /// Recognizes `c * q^e`.
    pub fn as_monomial(&self) -> Option<MonomialScalar> {
        if !self.is_laurent() {
            return None;
        }
        self.num.as_monomial().map(|(coeff, exp)| MonomialScalar { coeff, exp })
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.as_monomial() {
            Some(m) if m.exp == 0 => Some(m.coeff),
            _ if self.is_zero() => Some(BigRational::zero()),
            _ => None,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        if let Some(m) = base.as_monomial() {
            let c = num_traits::pow::pow(m.coeff, e as usize);
            return Ok(Self::monomial(c, m.exp * e as i64));
        }
        let num = base.num.pow(e as u32);
        let den = base.den.pow(e as u32);
        Ok(Self::from_coprime(num, den))
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        QRational { num: self.num.shift(e), den: self.den.clone() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QRational { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Square root in `Q(q)`, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        // the denominator is monic and coprime to the numerator, so both
        // parts must be squares on their own
        let num = self.num.sqrt()?;
        let den = self.den.sqrt()?;
        Some(Self::from_coprime(num, den))
    }

    /// Substitutes `q -> q^d`.
    pub fn substitute_power(&self, d: i64) -> Self {
        let n = self.num.substitute_power(d);
        let m = self.den.substitute_power(d);
        if d > 0 {
            Self::from_coprime(n, m)
        } else {
            Self::new(n, m).expect("nonzero denominator")
        }
    }

    pub(crate) fn fmt_var(&self, var: &str) -> String {
        let num = self.num.fmt_var(var);
        if self.den.is_one() {
            return num;
        }
        let den = self.den.fmt_var(var);
        let num = if self.num.span() > 1 || self.num.as_monomial().is_some_and(|(c, _)| !c.denom().is_one()) {
            format!("({num})")
        } else {
            num
        };
        format!("{num}/({den})")
    }

    pub fn parse(text: &str) -> Result<Self> {
        super::expr::parse_scalar(text, "q")
    }

    pub fn parse_in(text: &str, var: &str) -> Result<Self> {
        super::expr::parse_scalar(text, var)
    }
}

impl fmt::Display for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("q"))
    }
}

impl fmt::Debug for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QRational({self})")
    }
}

impl Default for QRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for QRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<QLaurent> for QRational {
    fn from(p: QLaurent) -> Self {
        Self::from_laurent(p)
    }
}

impl From<BigRational> for QRational {
    fn from(c: BigRational) -> Self {
        Self::from_rational(c)
    }
}

impl From<BigInt> for QRational {
    fn from(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }
}

fn add_impl(a: &QRational, b: &QRational, negate_b: bool) -> QRational {
    let c = if negate_b { -&b.num } else { b.num.clone() };
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return QRational { num: c, den: b.den.clone() };
    }
    if a.den == b.den {
        let t = &a.num + &c;
        if a.den.is_one() {
            return QRational::from_laurent(t);
        }
        return QRational::new(t, a.den.clone()).expect("nonzero denominator");
    }
    // for reduced a/b and c/d only gcd(b, d) can survive in the sum
    let g = a.den.poly_gcd(&b.den);
    if g.is_one() {
        let t = &(&a.num * &b.den) + &(&c * &a.den);
        return QRational::from_coprime(t, &a.den * &b.den);
    }
    let bp = a.den.div_exact(&g).expect("gcd divides");
    let dp = b.den.div_exact(&g).expect("gcd divides");
    let t = &(&a.num * &dp) + &(&c * &bp);
    let g2 = t.poly_gcd(&g);
    let (t, gr) = if g2.is_one() || t.is_zero() {
        (t, g)
    } else {
        (t.div_exact(&g2).expect("gcd divides"), g.div_exact(&g2).expect("gcd divides"))
    };
    QRational::from_coprime(t, &(&bp * &dp) * &gr)
}

fn mul_impl(a: &QRational, b: &QRational) -> QRational {
    if a.is_zero() || b.is_zero() {
        return QRational::zero();
    }
    if a.den.is_one() && b.den.is_one() {
        return QRational::from_laurent(&a.num * &b.num);
    }
    let cancel = |n: &QLaurent, d: &QLaurent| -> (QLaurent, QLaurent) {
        if d.is_one() || n.as_monomial().is_some() {
            return (n.clone(), d.clone());
        }
        let g = n.poly_gcd(d);
        if g.is_one() {
            (n.clone(), d.clone())
        } else {
            (n.div_exact(&g).expect("gcd divides"), d.div_exact(&g).expect("gcd divides"))
        }
    };
    let (an, bd) = cancel(&a.num, &b.den);
    let (bn, ad) = cancel(&b.num, &a.den);
    QRational::from_coprime(&an * &bn, &ad * &bd)
}

impl Add<&QRational> for &QRational {
    type Output = QRational;
    fn add(self, rhs: &QRational) -> QRational {
        add_impl(self, rhs, false)
    }
}

impl Sub<&QRational> for &QRational {
    type Output = QRational;
    fn sub(self, rhs: &QRational) -> QRational {
        add_impl(self, rhs, true)
    }
}

impl Mul<&QRational> for &QRational {
    type Output = QRational;
    fn mul(self, rhs: &QRational) -> QRational {
        mul_impl(self, rhs)
    }
}

/// # Panics
/// On division by zero; use [`QRational::inv`] for a checked variant.
impl Div<&QRational> for &QRational {
    type Output = QRational;
    fn div(self, rhs: &QRational) -> QRational {
        mul_impl(self, &rhs.inv().expect("division by zero in Q(q)"))
    }
}

impl Neg for &QRational {
    type Output = QRational;
    fn neg(self) -> QRational {
        QRational { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for QRational {
    type Output = QRational;
    fn neg(self) -> QRational {
        -&self
    }
}

forward_owned!(QRational, Add add, Sub sub, Mul mul, Div div);

/// Sums over one running common denominator and reduces once at the end,
/// which is much cheaper than pairwise addition when the denominators are
/// large and mostly divide each other.
fn sum_refs(terms: &[&QRational]) -> QRational {
    let mut terms: Vec<&QRational> = terms.iter().copied().filter(|t| !t.is_zero()).collect();
    if terms.len() <= 2 {
        return terms.into_iter().fold(QRational::zero(), |a, b| &a + b);
    }
    // the largest denominator first, so that the others tend to divide it
    terms.sort_by_key(|t| std::cmp::Reverse(t.den.span()));
    let mut num = terms[0].num.clone();
    let mut den = terms[0].den.clone();
    for t in &terms[1..] {
        if let Some(cof) = den.div_exact(&t.den) {
            num = &num + &(&t.num * &cof);
            continue;
        }
        let g = den.poly_gcd(&t.den);
        let dp = t.den.div_exact(&g).expect("gcd divides");
        let bp = den.div_exact(&g).expect("gcd divides");
        num = &(&num * &dp) + &(&t.num * &bp);
        den = &den * &dp;
    }
    QRational::new(num, den).expect("nonzero denominator")
}

impl std::iter::Sum for QRational {
    fn sum<I: Iterator<Item = QRational>>(iter: I) -> Self {
        let terms: Vec<QRational> = iter.collect();
        sum_refs(&terms.iter().collect::<Vec<_>>())
    }
}

impl<'a> std::iter::Sum<&'a QRational> for QRational {
    fn sum<I: Iterator<Item = &'a QRational>>(iter: I) -> Self {
        sum_refs(&iter.collect::<Vec<_>>())
    }
}

impl std::iter::Product for QRational {
    fn product<I: Iterator<Item = QRational>>(iter: I) -> Self {
        iter.fold(QRational::one(), |a, b| &a * &b)
    }
}

//! Laurent polynomials in `q` with rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::zpoly::{self, ZPoly};

/// A Laurent polynomial `content * q^low * prim(q)` with `prim` a primitive
/// integer polynomial whose constant and leading coefficients are nonzero and
/// whose leading coefficient is positive. The zero polynomial has empty `prim`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QLaurent {
    content: BigRational,
    low: i64,
    prim: ZPoly,
}

impl QLaurent {
    pub fn zero() -> Self {
        QLaurent { content: BigRational::zero(), low: 0, prim: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(n.into()))
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Self::q_pow(1)
    }

    pub fn q_pow(e: i64) -> Self {
        Self::monomial(BigRational::one(), e)
    }

    pub fn monomial(c: BigRational, e: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QLaurent { content: c, low: e, prim: vec![BigInt::one()] }
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(terms: I) -> Self {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, (e, c)| &acc + &Self::monomial(c, e))
    }

    /// Integer coefficients listed from `q^low` upward.
    pub fn from_int_coeffs(low: i64, coeffs: &[i64]) -> Self {
        Self::from_parts(BigRational::one(), low, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub(crate) fn from_parts(scale: BigRational, low: i64, mut z: ZPoly) -> Self {
        zpoly::trim(&mut z);
        let lead_zeros = z.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == z.len() || scale.is_zero() {
            return Self::zero();
        }
        z.drain(..lead_zeros);
        let (k, prim) = zpoly::split_content(z);
        QLaurent { content: scale * BigRational::from_integer(k), low: low + lead_zeros as i64, prim }
    }

    pub(crate) fn prim(&self) -> &[BigInt] {
        &self.prim
    }

    pub fn is_zero(&self) -> bool {
        self.prim.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.prim.len() == 1 && self.content.is_one()
    }

    /// True for a nonzero multiple of `q^0`.
    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.low == 0 && self.prim.len() == 1)
    }

    /// `Some((c, e))` when the polynomial is the single term `c*q^e`.
    pub fn as_monomial(&self) -> Option<(BigRational, i64)> {
        (self.prim.len() == 1).then(|| (self.content.clone(), self.low))
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.prim.len() as i64 - 1)
    }

    /// Number of stored coefficient slots, i.e. `degree - valuation + 1`.
    pub fn span(&self) -> usize {
        self.prim.len()
    }

    pub fn coeff(&self, e: i64) -> BigRational {
        let i = e - self.low;
        if i < 0 || i >= self.prim.len() as i64 {
            return BigRational::zero();
        }
        &self.content * BigRational::from_integer(self.prim[i as usize].clone())
    }

    pub fn leading_coeff(&self) -> BigRational {
        match self.prim.last() {
            Some(l) => &self.content * BigRational::from_integer(l.clone()),
            None => BigRational::zero(),
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, BigRational)> + '_ {
        self.prim.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| {
            (self.low + i as i64, &self.content * BigRational::from_integer(c.clone()))
        })
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        QLaurent { low: self.low + e, ..self.clone() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() || self.is_zero() {
            return Self::zero();
        }
        QLaurent { content: &self.content * c, ..self.clone() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact quotient, or `None` when `other` does not divide `self` in the
    /// Laurent polynomial ring.
    pub fn div_exact(&self, other: &QLaurent) -> Option<QLaurent> {
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let quot = zpoly::exact_div(&self.prim, &other.prim)?;
        Some(Self::from_parts(&self.content / &other.content, self.low - other.low, quot))
    }

    /// Monic gcd of the polynomial parts, ignoring powers of `q`.
    pub fn poly_gcd(&self, other: &QLaurent) -> QLaurent {
        if self.is_zero() && other.is_zero() {
            return Self::zero();
        }
        let g = zpoly::gcd(&self.prim, &other.prim);
        Self::from_parts(BigRational::one(), 0, g).monic()
    }

    /// Rescales so the leading coefficient is 1.
    pub fn monic(&self) -> QLaurent {
        match self.prim.last() {
            None => Self::zero(),
            Some(l) => QLaurent {
                content: BigRational::new(BigInt::one(), l.clone()),
                ..self.clone()
            },
        }
    }

    /// Square root in `Q[q, q^-1]`, if one exists. The root returned has a
    /// positive leading coefficient.
    pub fn sqrt(&self) -> Option<QLaurent> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (low, top) = (self.valuation()?, self.degree()?);
        if low % 2 != 0 || top % 2 != 0 {
            return None;
        }
        let (half_low, half_top) = (low / 2, top / 2);
        let lead = rational_sqrt(&self.leading_coeff())?;
        // peel coefficients of the root from the top down
        let mut root: Vec<BigRational> = vec![BigRational::zero(); (half_top - half_low + 1) as usize];
        let m = root.len() - 1;
        root[m] = lead;
        let twice_lead = &root[m] * BigRational::from_integer(2.into());
        for j in (0..m).rev() {
            let target = self.coeff(2 * half_low + (m + j) as i64);
            let cross: BigRational = (j + 1..m).filter(|&a| m + j - a > j).map(|a| &root[a] * &root[m + j - a]).sum();
            root[j] = (target - cross) / &twice_lead;
        }
        let cand = QLaurent::from_terms(root.into_iter().enumerate().map(|(i, c)| (half_low + i as i64, c)));
        (&cand * &cand == *self).then_some(cand)
    }

    /// Substitutes `q -> q^d`.
    pub fn substitute_power(&self, d: i64) -> QLaurent {
        assert!(d != 0, "substitution q -> q^0 collapses the ring");
        QLaurent::from_terms(self.terms().map(|(e, c)| (e * d, c)))
    }

    pub(crate) fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            if mono.is_empty() {
                out.push_str(&fmt_rational(&mag));
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&fmt_rational(&mag));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("q"))
    }
}

impl fmt::Debug for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QLaurent({self})")
    }
}

impl Default for QLaurent {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for QLaurent {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for QLaurent {
    fn from(c: BigRational) -> Self {
        Self::constant(c)
    }
}

fn add_impl(a: &QLaurent, b: &QLaurent, negate_b: bool) -> QLaurent {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate_b { -b } else { b.clone() };
    }
    let low = a.low.min(b.low);
    let (na, da) = (a.content.numer(), a.content.denom());
    let (nb, db) = (b.content.numer(), b.content.denom());
    let l = da.lcm(db);
    let sa = na * (&l / da);
    let mut sb = nb * (&l / db);
    if negate_b {
        sb = -sb;
    }
    let z = zpoly::add_scaled(&a.prim, &sa, (a.low - low) as usize, &b.prim, &sb, (b.low - low) as usize);
    QLaurent::from_parts(BigRational::new(BigInt::one(), l), low, z)
}

impl Add<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        add_impl(self, rhs, false)
    }
}

impl Sub<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        add_impl(self, rhs, true)
    }
}

impl Mul<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        if self.is_zero() || rhs.is_zero() {
            return QLaurent::zero();
        }
        QLaurent {
            content: &self.content * &rhs.content,
            low: self.low + rhs.low,
            prim: zpoly::mul(&self.prim, &rhs.prim),
        }
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent { content: -&self.content, ..self.clone() }
    }
}

impl Neg for QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        -&self
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty { (&self).$m(&rhs) }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &$ty) -> $ty { (&self).$m(rhs) }
        }
        impl $tr<$ty> for &$ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty { self.$m(&rhs) }
        }
    )*};
}
pub(crate) use forward_owned;

forward_owned!(QLaurent, Add add, Sub sub, Mul mul);

/// The q-integer `[n]_q = (q^n - 1)/(q - 1)`, with `[0] = 0` and
/// `[-n] = -q^{-n} [n]`.
pub fn qint(n: i64) -> QLaurent {
    let ones = vec![1i64; n.unsigned_abs() as usize];
    if n >= 0 {
        QLaurent::from_int_coeffs(0, &ones)
    } else {
        -QLaurent::from_int_coeffs(n, &ones)
    }
}

/// `[n]_q! = [1][2]...[n]`.
pub fn qfactorial(n: u32) -> QLaurent {
    (1..=n as i64).fold(QLaurent::one(), |acc, k| &acc * &qint(k))
}

/// The `ell`-th cyclotomic polynomial in `q`.
pub fn cyclotomic(ell: u32) -> QLaurent {
    assert!(ell > 0, "cyclotomic index must be positive");
    let mut num: ZPoly = vec![BigInt::zero(); ell as usize + 1];
    num[0] = BigInt::from(-1);
    num[ell as usize] = BigInt::one();
    for d in (1..ell).filter(|d| ell.is_multiple_of(*d)) {
        let phi = cyclotomic(d);
        num = zpoly::exact_div(&num, phi.prim()).expect("cyclotomic factors divide q^n - 1");
    }
    QLaurent::from_parts(BigRational::one(), 0, num)
}

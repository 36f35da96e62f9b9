//! Mode-tagged scalars: generic `q` or `q` a primitive root of unity.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{CyclotomicScalar, QRational};
use crate::error::{Error, Result};

/// How `q` is interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarMode {
    /// `q` transcendental; scalars live in `Q(q)`.
    Generic,
    /// `q` a primitive `ell`-th root of unity; scalars live in `Q[q]/Phi_ell`.
    Root(u32),
}

impl ScalarMode {
    pub fn root(ell: u32) -> Result<Self> {
        if ell == 0 {
            return Err(Error::domain("root of unity order must be positive"));
        }
        Ok(ScalarMode::Root(ell))
    }
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Generic => f.write_str("generic"),
            ScalarMode::Root(l) => write!(f, "root({l})"),
        }
    }
}

/// A scalar `c * q^e` with rational `c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialScalar {
    pub coeff: BigRational,
    pub exp: i64,
}

impl MonomialScalar {
    pub fn to_qrational(&self) -> QRational {
        QRational::monomial(self.coeff.clone(), self.exp)
    }
}

impl fmt::Display for MonomialScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_qrational().fmt(f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Generic(QRational),
    Root(CyclotomicScalar),
}

impl Scalar {
    pub fn mode(&self) -> ScalarMode {
        match self {
            Scalar::Generic(_) => ScalarMode::Generic,
            Scalar::Root(c) => ScalarMode::Root(c.level()),
        }
    }

    pub fn zero(mode: ScalarMode) -> Self {
        match mode {
            ScalarMode::Generic => Scalar::Generic(QRational::zero()),
            ScalarMode::Root(l) => Scalar::Root(CyclotomicScalar::zero(l)),
        }
    }

    pub fn one(mode: ScalarMode) -> Self {
        Self::from_int(mode, 1)
    }

    pub fn from_int(mode: ScalarMode, n: i64) -> Self {
        Self::from_rational(mode, BigRational::from_integer(n.into()))
    }

    pub fn from_rational(mode: ScalarMode, c: BigRational) -> Self {
        match mode {
            ScalarMode::Generic => Scalar::Generic(QRational::from_rational(c)),
            ScalarMode::Root(l) => Scalar::Root(CyclotomicScalar::from_rational(l, c)),
        }
    }

    pub fn q_pow(mode: ScalarMode, e: i64) -> Self {
        match mode {
            ScalarMode::Generic => Scalar::Generic(QRational::q_pow(e)),
            ScalarMode::Root(l) => Scalar::Root(CyclotomicScalar::q_pow(l, e)),
        }
    }

    /// Maps a generic scalar into `mode`.
    pub fn from_qrational(mode: ScalarMode, r: &QRational) -> Result<Self> {
        match mode {
            ScalarMode::Generic => Ok(Scalar::Generic(r.clone())),
            ScalarMode::Root(l) => Ok(Scalar::Root(CyclotomicScalar::from_qrational(l, r)?)),
        }
    }

    /// Re-reads the scalar in `mode`: generic values specialize to roots of
    /// unity, anything else must already match.
    pub fn to_mode(&self, mode: ScalarMode) -> Result<Self> {
        match self {
            _ if self.mode() == mode => Ok(self.clone()),
            Scalar::Generic(r) => Self::from_qrational(mode, r),
            Scalar::Root(_) => Err(Error::ModeMismatch(self.mode().to_string(), mode.to_string())),
        }
    }

    pub fn parse(mode: ScalarMode, text: &str) -> Result<Self> {
        Self::from_qrational(mode, &QRational::parse(text)?)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Generic(r) => r.is_zero(),
            Scalar::Root(c) => c.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Generic(r) => r.is_one(),
            Scalar::Root(c) => c.is_one(),
        }
    }

    pub fn as_generic(&self) -> Option<&QRational> {
        match self {
            Scalar::Generic(r) => Some(r),
            Scalar::Root(_) => None,
        }
    }

    fn mismatch(&self, other: &Self) -> Error {
        Error::ModeMismatch(self.mode().to_string(), other.mode().to_string())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Scalar::Generic(a), Scalar::Generic(b)) => Ok(Scalar::Generic(a + b)),
            (Scalar::Root(a), Scalar::Root(b)) if a.level() == b.level() => Ok(Scalar::Root(a + b)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Scalar::Generic(a), Scalar::Generic(b)) => Ok(Scalar::Generic(a * b)),
            (Scalar::Root(a), Scalar::Root(b)) if a.level() == b.level() => Ok(Scalar::Root(a * b)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Self> {
        match self {
            Scalar::Generic(r) => Ok(Scalar::Generic(r.inv()?)),
            Scalar::Root(c) => Ok(Scalar::Root(c.inv()?)),
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        match self {
            Scalar::Generic(r) => Ok(Scalar::Generic(r.pow(e)?)),
            Scalar::Root(c) => Ok(Scalar::Root(c.pow(e)?)),
        }
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        match self {
            Scalar::Generic(r) => Scalar::Generic(r.shift(e)),
            Scalar::Root(_) => self * &Scalar::q_pow(self.mode(), e),
        }
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        self * &Scalar::from_rational(self.mode(), BigRational::from_integer(n.clone()))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Generic(r) => r.fmt(f),
            Scalar::Root(c) => c.fmt(f),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Generic(r) => write!(f, "{r:?}"),
            Scalar::Root(c) => write!(f, "{c:?}"),
        }
    }
}

/// # Panics
/// When the operands carry different modes; use [`Scalar::try_add`] to check.
impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.try_add(rhs).expect("scalar mode mismatch")
    }
}

/// # Panics
/// When the operands carry different modes.
impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.try_sub(rhs).expect("scalar mode mismatch")
    }
}

/// # Panics
/// When the operands carry different modes.
impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.try_mul(rhs).expect("scalar mode mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Generic(r) => Scalar::Generic(-r),
            Scalar::Root(c) => Scalar::Root(-c),
        }
    }
}

impl From<QRational> for Scalar {
    fn from(r: QRational) -> Self {
        Scalar::Generic(r)
    }
}

impl From<CyclotomicScalar> for Scalar {
    fn from(c: CyclotomicScalar) -> Self {
        Scalar::Root(c)
    }
}

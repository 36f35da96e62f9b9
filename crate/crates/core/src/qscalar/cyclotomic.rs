//! Residues in `Q[q] / (Phi_ell)`, the specialization of `q` at a primitive
//! `ell`-th root of unity.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::laurent::{cyclotomic, QLaurent};
use super::QRational;
use crate::error::{Error, Result};

type QPoly = Vec<BigRational>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicScalar {
    level: u32,
    /// Coefficients of `1, q, q^2, ...`, of length below `deg Phi_level`, trimmed.
    residue: QPoly,
}

fn modulus(level: u32) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cyclotomic cache poisoned");
    guard
        .entry(level)
        .or_insert_with(|| {
            let phi = cyclotomic(level);
            let deg = phi.degree().unwrap();
            Arc::new((0..=deg).map(|e| phi.coeff(e).to_integer()).collect())
        })
        .clone()
}

fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn reduce(level: u32, mut p: QPoly) -> QPoly {
    let phi = modulus(level);
    let d = phi.len() - 1;
    while p.len() > d {
        let top = p.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let base = p.len() - d;
        for (j, c) in phi[..d].iter().enumerate() {
            p[base + j] -= &top * BigRational::from_integer(c.clone());
        }
    }
    trim(&mut p);
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lb = b.last().unwrap();
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + b.len() - 1] / lb;
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        quot[k] = c;
    }
    trim(&mut rem);
    (quot, rem)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(&mut out);
    out
}

impl CyclotomicScalar {
    pub fn zero(level: u32) -> Self {
        CyclotomicScalar { level, residue: Vec::new() }
    }

    pub fn one(level: u32) -> Self {
        Self::from_rational(level, BigRational::one())
    }

    pub fn from_rational(level: u32, c: BigRational) -> Self {
        let mut residue = vec![c];
        trim(&mut residue);
        CyclotomicScalar { level, residue }
    }

    /// `q^e` with `q^level = 1`.
    pub fn q_pow(level: u32, e: i64) -> Self {
        let k = e.rem_euclid(level as i64) as usize;
        let mut p = vec![BigRational::zero(); k + 1];
        p[k] = BigRational::one();
        CyclotomicScalar { level, residue: reduce(level, p) }
    }

    pub fn from_laurent(level: u32, p: &QLaurent) -> Self {
        let mut acc = vec![BigRational::zero(); level as usize];
        for (e, c) in p.terms() {
            acc[e.rem_euclid(level as i64) as usize] += c;
        }
        CyclotomicScalar { level, residue: reduce(level, acc) }
    }

    /// Specializes an element of `Q(q)`; fails when its denominator vanishes
    /// at the root of unity.
    pub fn from_qrational(level: u32, r: &QRational) -> Result<Self> {
        let num = Self::from_laurent(level, r.numer());
        let den = Self::from_laurent(level, r.denom());
        Ok(&num * &den.inv()?)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn residue(&self) -> &[BigRational] {
        &self.residue
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.residue.len() == 1 && self.residue[0].is_one()
    }

    pub fn to_laurent(&self) -> QLaurent {
        QLaurent::from_terms(self.residue.iter().enumerate().map(|(i, c)| (i as i64, c.clone())))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // extended Euclid: track s with s*self = r (mod Phi)
        let phi: QPoly = modulus(self.level).iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let (mut r0, mut r1) = (phi, self.residue.clone());
        let (mut s0, mut s1): (QPoly, QPoly) = (Vec::new(), vec![BigRational::one()]);
        while r1.len() > 1 {
            let (quot, rem) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&quot, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r1.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let c = r1[0].recip();
        let s: QPoly = s1.into_iter().map(|x| x * &c).collect();
        Ok(CyclotomicScalar { level: self.level, residue: reduce(self.level, s) })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one(self.level);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        Ok(acc)
    }

    pub(crate) fn fmt_var(&self, var: &str) -> String {
        self.to_laurent().fmt_var(var)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.level, other.level, "cyclotomic levels differ");
    }
}

impl std::ops::Add<&CyclotomicScalar> for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn add(self, rhs: &CyclotomicScalar) -> CyclotomicScalar {
        self.check(rhs);
        let neg: QPoly = rhs.residue.iter().map(|c| -c).collect();
        CyclotomicScalar { level: self.level, residue: poly_sub(&self.residue, &neg) }
    }
}

impl std::ops::Sub<&CyclotomicScalar> for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn sub(self, rhs: &CyclotomicScalar) -> CyclotomicScalar {
        self.check(rhs);
        CyclotomicScalar { level: self.level, residue: poly_sub(&self.residue, &rhs.residue) }
    }
}

impl std::ops::Mul<&CyclotomicScalar> for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn mul(self, rhs: &CyclotomicScalar) -> CyclotomicScalar {
        self.check(rhs);
        CyclotomicScalar { level: self.level, residue: reduce(self.level, poly_mul(&self.residue, &rhs.residue)) }
    }
}

impl std::ops::Neg for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn neg(self) -> CyclotomicScalar {
        CyclotomicScalar { level: self.level, residue: self.residue.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("q"))
    }
}

impl fmt::Debug for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicScalar[{}]({self})", self.level)
    }
}

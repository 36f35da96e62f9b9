//! Dense integer polynomials (coefficients low to high) with a multi-modular gcd.
//!
//! These are the workhorse behind [`QLaurent`](super::QLaurent) and
//! [`QRational`](super::QRational): rational polynomials are stored as a
//! rational content times a primitive integer polynomial.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) type ZPoly = Vec<BigInt>;

pub(crate) fn trim(p: &mut ZPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Positive gcd of the coefficients (zero for the zero polynomial).
pub(crate) fn content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        if g.is_one() {
            break;
        }
        g = g.gcd(c);
    }
    g
}

/// Splits `p` into `(c, prim)` with `p = c * prim`, `prim` primitive and with
/// positive leading coefficient. The zero polynomial gives `(0, [])`.
pub(crate) fn split_content(mut p: ZPoly) -> (BigInt, ZPoly) {
    trim(&mut p);
    let Some(lead) = p.last() else {
        return (BigInt::zero(), p);
    };
    let mut c = content(&p);
    if lead.is_negative() {
        c = -c;
    }
    if !c.is_one() {
        for x in p.iter_mut() {
            *x = &*x / &c;
        }
    }
    (c, p)
}

pub(crate) fn add_scaled(a: &[BigInt], sa: &BigInt, a_shift: usize, b: &[BigInt], sb: &BigInt, b_shift: usize) -> ZPoly {
    let len = (a.len() + a_shift).max(b.len() + b_shift);
    let mut out = vec![BigInt::zero(); len];
    for (i, c) in a.iter().enumerate() {
        out[i + a_shift] += c * sa;
    }
    for (i, c) in b.iter().enumerate() {
        out[i + b_shift] += c * sb;
    }
    trim(&mut out);
    out
}

fn max_bits(p: &[BigInt]) -> u64 {
    p.iter().map(|c| c.bits()).max().unwrap_or(0)
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len() == 1 {
        return b.iter().map(|c| c * &a[0]).collect();
    }
    if b.len() == 1 {
        return a.iter().map(|c| c * &b[0]).collect();
    }
    if a.len().min(b.len()) >= 24 {
        return mul_kronecker(a, b);
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Packs coefficients into one integer at `2^slot`, multiplies, and unpacks
/// with balanced digits.
fn mul_kronecker(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let terms = a.len().min(b.len()) as u64;
    let slot = max_bits(a) + max_bits(b) + 64 - terms.leading_zeros() as u64 + 2;
    let prod = pack(a, slot) * pack(b, slot);
    unpack_signed(&prod, slot, a.len() + b.len() - 1)
}

fn unpack_balanced(mag: &BigUint, slot: u64, len: usize) -> ZPoly {
    let words = mag.to_u64_digits();
    let mask = (BigUint::one() << slot) - 1u32;
    let field = |start: u64| -> BigUint {
        let mut out = BigUint::zero();
        let first = (start / 64) as usize;
        let last = (start + slot).div_ceil(64) as usize;
        for w in (first..last.min(words.len())).rev() {
            out <<= 64u32;
            out += words[w];
        }
        out >>= (start % 64) as usize;
        out & &mask
    };
    let half = BigInt::from(BigUint::one() << (slot - 1));
    let full = BigInt::one() << slot;
    let mut carry = BigInt::zero();
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let raw = BigInt::from(field(i as u64 * slot)) + &carry;
        let (digit, next) = if raw >= half {
            (&raw - &full, BigInt::one())
        } else {
            (raw, BigInt::zero())
        };
        carry = next;
        out.push(digit);
    }
    out
}

/// Exact quotient `a / b` over the integers, or `None` if `b` does not divide `a`.
pub(crate) fn exact_div(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    assert!(!b.is_empty(), "division by the zero polynomial");
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    if b.len() == 1 {
        let d = &b[0];
        return a
            .iter()
            .map(|c| {
                let (q, r) = c.div_rem(d);
                r.is_zero().then_some(q)
            })
            .collect();
    }
    if let Some(fast) = exact_div_small(a, b) {
        return fast;
    }
    if b.len() >= 8 && a.len() - b.len() >= 8 {
        if let Some(fast) = exact_div_kronecker(a, b) {
            return fast;
        }
    }
    let mut rem: ZPoly = a.to_vec();
    let lb = b.last().unwrap();
    let qlen = a.len() - b.len() + 1;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let top = &rem[k + b.len() - 1];
        if top.is_zero() {
            continue;
        }
        let q = if lb.is_one() {
            top.clone()
        } else {
            let (q, r) = top.div_rem(lb);
            if !r.is_zero() {
                return None;
            }
            q
        };
        for (j, c) in b.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            rem[k + j] -= &q * c;
        }
        quot[k] = q;
    }
    rem.iter().all(|c| c.is_zero()).then_some(quot)
}

/// [`exact_div`] through one integer division of the packed operands. The
/// quotient's coefficient size is guessed and confirmed by multiplying back;
/// `None` when no guess up to a few doublings works.
fn exact_div_kronecker(a: &[BigInt], b: &[BigInt]) -> Option<Option<ZPoly>> {
    let qlen = a.len() - b.len() + 1;
    let mut slot = max_bits(a).max(max_bits(b)) + 64 - (qlen as u64).leading_zeros() as u64 + 2;
    for _ in 0..3 {
        let (quot, rem) = pack(a, slot).div_rem(&pack(b, slot));
        if !rem.is_zero() {
            // an exact polynomial quotient would have left no remainder
            return Some(None);
        }
        let q = unpack_signed(&quot, slot, qlen);
        if mul(&q, b) == a {
            return Some(Some(q));
        }
        slot *= 2;
    }
    None
}

/// `sum p_i 2^{slot i}`, assembled word by word; needs `|p_i| < 2^slot`.
fn pack(p: &[BigInt], slot: u64) -> BigInt {
    let words = (p.len() as u64 * slot / 32 + 2) as usize;
    let mut pos = vec![0u32; words];
    let mut neg = vec![0u32; words];
    for (i, c) in p.iter().enumerate() {
        let buf = if c.sign() == Sign::Minus { &mut neg } else { &mut pos };
        let start = i as u64 * slot;
        let (w0, bit) = ((start / 32) as usize, start % 32);
        let mut carry = 0u64;
        let mut w = w0;
        for d in c.magnitude().iter_u32_digits() {
            let v = (u64::from(d) << bit) | carry;
            buf[w] |= v as u32;
            carry = v >> 32;
            w += 1;
        }
        if carry != 0 {
            buf[w] |= carry as u32;
        }
    }
    BigInt::from(BigUint::new(pos)) - BigInt::from(BigUint::new(neg))
}

fn unpack_signed(v: &BigInt, slot: u64, len: usize) -> ZPoly {
    let mut out = unpack_balanced(v.magnitude(), slot, len);
    if v.sign() == Sign::Minus {
        for c in out.iter_mut() {
            *c = -&*c;
        }
    }
    out
}

/// [`exact_div`] in `i128` arithmetic; `None` when an operand or an
/// intermediate value does not fit.
fn exact_div_small(a: &[BigInt], b: &[BigInt]) -> Option<Option<ZPoly>> {
    let mut rem: Vec<i128> = a.iter().map(|c| c.to_i128()).collect::<Option<_>>()?;
    let b: Vec<i128> = b.iter().map(|c| c.to_i128()).collect::<Option<_>>()?;
    let lb = *b.last().unwrap();
    let qlen = a.len() - b.len() + 1;
    let mut quot = vec![0i128; qlen];
    for k in (0..qlen).rev() {
        let top = rem[k + b.len() - 1];
        if top == 0 {
            continue;
        }
        if top % lb != 0 {
            return Some(None);
        }
        let q = top / lb;
        for (j, &c) in b.iter().enumerate().filter(|(_, c)| **c != 0) {
            rem[k + j] = rem[k + j].checked_sub(q.checked_mul(c)?)?;
        }
        quot[k] = q;
    }
    if rem.iter().any(|&c| c != 0) {
        return Some(None);
    }
    Some(Some(quot.into_iter().map(BigInt::from).collect()))
}

// ---------------------------------------------------------------------------
// arithmetic modulo word-sized primes

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(256);
        let mut n = (1u64 << 62) - 1;
        while out.len() < 256 {
            if is_prime_u64(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

fn reduce_mod(p: &[BigInt], m: u64) -> Vec<u64> {
    let bm = BigInt::from(m);
    let mut out: Vec<u64> = p.iter().map(|c| c.mod_floor(&bm).to_u64().unwrap()).collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Montgomery arithmetic modulo an odd `p < 2^62`, which keeps the gcd
/// inner loop free of 128-bit divisions.
struct Mont {
    p: u64,
    /// `-p^{-1} mod 2^64`
    pinv: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl Mont {
    fn new(p: u64) -> Self {
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        Mont { p, pinv: inv.wrapping_neg(), r2: mul_mod(r, r, p) }
    }

    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pinv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    fn to_mont(&self, a: u64) -> u64 {
        self.mul(a, self.r2)
    }

    fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    fn inv(&self, a: u64) -> u64 {
        self.to_mont(inv_mod(self.from_mont(a), self.p))
    }
}

/// Monic gcd over `Z/p`.
fn gcd_mod(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<u64> {
    let m = Mont::new(p);
    let mut a: Vec<u64> = a.into_iter().map(|c| m.to_mont(c)).collect();
    let mut b: Vec<u64> = b.into_iter().map(|c| m.to_mont(c)).collect();
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let lb_inv = m.inv(*b.last().unwrap());
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let f = m.mul(*a.last().unwrap(), lb_inv);
            for (j, c) in b.iter().enumerate() {
                let t = m.mul(f, *c);
                let slot = &mut a[shift + j];
                *slot = if *slot >= t { *slot - t } else { *slot + p - t };
            }
            while a.last() == Some(&0) {
                a.pop();
            }
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    let mut a: Vec<u64> = a.into_iter().map(|c| m.from_mont(c)).collect();
    if let Some(&l) = a.last() {
        let li = inv_mod(l, p);
        for c in a.iter_mut() {
            *c = mul_mod(*c, li, p);
        }
    }
    a
}

/// Gcd of two primitive integer polynomials, returned primitive with positive
/// leading coefficient.
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() {
        return split_content(b.to_vec()).1;
    }
    if b.is_empty() {
        return split_content(a.to_vec()).1;
    }
    if a.len() == 1 || b.len() == 1 {
        return vec![BigInt::one()];
    }
    if a == b {
        return a.to_vec();
    }
    let (_, a) = split_content(a.to_vec());
    let (_, b) = split_content(b.to_vec());
    let gamma = a.last().unwrap().gcd(b.last().unwrap());
    let mut modulus = BigInt::one();
    let mut image: ZPoly = Vec::new();
    let mut degree = usize::MAX;
    let mut previous: Option<ZPoly> = None;
    for &p in primes() {
        let gp_mod = (&gamma % BigInt::from(p)).to_u64().unwrap();
        if gp_mod == 0 {
            continue;
        }
        let g = gcd_mod(reduce_mod(&a, p), reduce_mod(&b, p), p);
        let deg = g.len() - 1;
        if deg == 0 {
            return vec![BigInt::one()];
        }
        if deg > degree {
            continue;
        }
        if degree == usize::MAX {
            // one operand dividing the other is common enough to test directly
            if deg + 1 == a.len() && exact_div(&b, &a).is_some() {
                return a;
            }
            if deg + 1 == b.len() && exact_div(&a, &b).is_some() {
                return b;
            }
        }
        let g: Vec<u64> = g.into_iter().map(|c| mul_mod(c, gp_mod, p)).collect();
        if deg < degree {
            degree = deg;
            modulus = BigInt::from(p);
            image = g.into_iter().map(BigInt::from).collect();
            previous = None;
            continue;
        }
        let bp = BigInt::from(p);
        let m_inv = BigInt::from(inv_mod((&modulus % &bp).to_u64().unwrap(), p));
        for (c, r) in image.iter_mut().zip(g) {
            let diff = (BigInt::from(r) - &*c).mod_floor(&bp);
            let t = (diff * &m_inv).mod_floor(&bp);
            *c += &modulus * t;
        }
        modulus *= &bp;
        let half = &modulus >> 1;
        let symmetric: ZPoly = image
            .iter()
            .map(|c| if c > &half { c - &modulus } else { c.clone() })
            .collect();
        if previous.as_ref() == Some(&symmetric) {
            let (_, cand) = split_content(symmetric.clone());
            if exact_div(&a, &cand).is_some() && exact_div(&b, &cand).is_some() {
                return cand;
            }
        }
        previous = Some(symmetric);
    }
    panic!("modular gcd exhausted its prime table");
}

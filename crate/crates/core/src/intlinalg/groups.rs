//! Membership tests for the integer groups preserving a standard skew form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntMatrix, SkewMatrix};
use crate::error::{Error, Result};
use crate::qscalar::ScalarMode;

/// `Lambda(m) = diag(m_1 S, ..., m_N S)`.
pub fn standard_form(m: &[BigInt]) -> IntMatrix {
    SkewMatrix::standard(m, 2 * m.len()).expect("fits").into_inner()
}

fn check_factors(m: &[BigInt]) -> Result<()> {
    if m.iter().any(|x| !x.is_positive()) {
        return Err(Error::domain("invariant factors must be positive"));
    }
    Ok(())
}

/// Whether `A^T Lambda(m) A = Lambda(m)`.
pub fn sp_membership(a: &IntMatrix, m: &[BigInt]) -> Result<bool> {
    check_factors(m)?;
    let r = 2 * m.len();
    if a.nrows() != r || a.ncols() != r {
        return Err(Error::dim(format!("expected a {r}x{r} matrix")));
    }
    let lambda = standard_form(m);
    let member = a.congruence(&lambda)? == lambda;
    if member && !a.determinant()?.is_one() {
        return Err(Error::Internal(format!("symplectic {a} without determinant 1")));
    }
    Ok(member)
}

struct Blocks {
    a: IntMatrix,
    b: IntMatrix,
}

fn split(mat: &IntMatrix, m: &[BigInt]) -> Result<Blocks> {
    check_factors(m)?;
    let n = mat.nrows();
    let r = 2 * m.len();
    if !mat.is_square() || r > n {
        return Err(Error::dim(format!("need a square matrix of size at least {r}")));
    }
    let det = mat.determinant()?;
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular(det.to_string()));
    }
    Ok(Blocks { a: mat.block(0..r, 0..r), b: mat.block(0..r, r..n) })
}

fn check_level(ell: u32, m: &[BigInt]) -> Result<()> {
    if ell == 0 {
        return Err(Error::domain("level must be positive"));
    }
    for x in m {
        if !x.gcd(&BigInt::from(ell)).is_one() {
            return Err(Error::LevelNotCoprime { ell, factor: x.to_string() });
        }
    }
    Ok(())
}

/// Whether `M = [[A, B], [C, D]]` lies in `Q(m, Z)` (generic) or `Q_ell(m, Z)`
/// (root of unity of order `ell`).
pub fn q_membership(mat: &IntMatrix, m: &[BigInt], mode: ScalarMode) -> Result<bool> {
    let Blocks { a, b } = split(mat, m)?;
    let lambda = standard_form(m);
    let form = a.congruence(&lambda)?;
    match mode {
        ScalarMode::Generic => {
            let member = b.is_zero() && form == lambda;
            if member && !a.determinant()?.is_one() {
                return Err(Error::Internal(format!("A-block of {mat} is not in SL")));
            }
            Ok(member)
        }
        ScalarMode::Root(ell) => {
            check_level(ell, m)?;
            let member = b.is_zero_mod(ell) && form.eq_mod(&lambda, ell);
            if member {
                // the Pfaffian of the congruence forces det A = 1 mod ell
                let det = a.determinant()?;
                if !(det - BigInt::one()).mod_floor(&BigInt::from(ell)).is_zero() {
                    return Err(Error::Internal(format!("A-block of {mat} has det != 1 mod {ell}")));
                }
            }
            Ok(member)
        }
    }
}

/// Whether `M` induces an anti-automorphism: `A^T Lambda A = -Lambda` with the
/// same block conditions as [`q_membership`].
pub fn anti_aut_check(mat: &IntMatrix, m: &[BigInt], mode: ScalarMode) -> Result<bool> {
    let Blocks { a, b } = split(mat, m)?;
    let lambda = standard_form(m);
    let target = lambda.neg();
    let form = a.congruence(&lambda)?;
    let member = match mode {
        ScalarMode::Generic => b.is_zero() && form == target,
        ScalarMode::Root(ell) => {
            check_level(ell, m)?;
            b.is_zero_mod(ell) && form.eq_mod(&target, ell)
        }
    };
    if member {
        let det = a.determinant()?;
        let expected = if m.len().is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
        let ok = match mode {
            ScalarMode::Generic => det == expected,
            // sign information is lost modulo 2
            ScalarMode::Root(2) => true,
            ScalarMode::Root(ell) => (det - expected).mod_floor(&BigInt::from(ell)).is_zero(),
        };
        if !ok {
            return Err(Error::Internal(format!("A-block of {mat} has the wrong determinant sign")));
        }
    }
    Ok(member)
}

/// The unique `(u, v)` with `a*u - b*v = 1`, `0 <= v <= a`, `0 <= u <= b`.
pub fn coprime_ladder(a: i64, b: i64) -> Result<(i64, i64)> {
    if a <= 0 || b <= 0 || a.gcd(&b) != 1 {
        return Err(Error::NotCoprime(a, b));
    }
    let e = a.extended_gcd(&b);
    // a*x + b*y = 1 -> u = x mod b taken in [1, b]
    let mut u = e.x.rem_euclid(b);
    if u == 0 {
        u = b;
    }
    let v = (a * u - 1) / b;
    debug_assert_eq!(a * u - b * v, 1);
    if !(0..=a).contains(&v) || !(0..=b).contains(&u) {
        return Err(Error::Internal(format!("ladder ({u}, {v}) for ({a}, {b}) left its box")));
    }
    Ok((u, v))
}

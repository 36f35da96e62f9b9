//! Seeded samplers and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use qlpa::intlinalg::{IntMatrix, SkewMatrix};
use qlpa::qalgebra::{AlgebraElement, AlgebraKind, Presentation};
use qlpa::qdiff::{LaurentSeries, QDiffOperator};
use qlpa::qscalar::{QLaurent, QRational, Scalar, ScalarMode};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

// ---------------------------------------------------------------------------
// integer matrices

pub fn random_skew(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> SkewMatrix {
    let mut h = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-bound..=bound);
            h[i][j] = v;
            h[j][i] = -v;
        }
    }
    let rows: Vec<&[i64]> = h.iter().map(Vec::as_slice).collect();
    SkewMatrix::from_i64(&rows).expect("skew by construction")
}

fn elementary(n: usize, i: usize, j: usize, c: i64) -> IntMatrix {
    let mut e = IntMatrix::identity(n);
    e[(i, j)] = BigInt::from(c);
    e
}

/// A product of `steps` random transvections and signed transpositions.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, steps: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            m[(0, 0)] = BigInt::from(-1);
        }
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let step = if rng.gen_ratio(1, 5) {
            // signed transposition of i and j
            let mut p = IntMatrix::identity(n);
            p[(i, i)] = BigInt::zero();
            p[(j, j)] = BigInt::zero();
            p[(i, j)] = BigInt::one();
            p[(j, i)] = BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 });
            p
        } else {
            elementary(n, i, j, *[-2i64, -1, 1, 2].choose(rng).unwrap())
        };
        m = m.mul(&step).expect("square");
    }
    m
}

/// `Lambda(m)` padded with `central` zero rows and columns.
pub fn canonical_skew(m: &[i64], central: usize) -> SkewMatrix {
    SkewMatrix::standard(&ints(m), 2 * m.len() + central).expect("standard form")
}

/// `I + c v v^T Lambda`: a transvection preserving the form `Lambda`.
pub fn symplectic_transvection(lambda: &IntMatrix, v: &[i64], c: i64) -> IntMatrix {
    let r = lambda.nrows();
    let vb = ints(v);
    let row: Vec<BigInt> = (0..r).map(|j| (0..r).map(|k| &vb[k] * &lambda[(k, j)]).sum()).collect();
    IntMatrix::from_fn(r, r, |i, j| {
        let delta = if i == j { BigInt::one() } else { BigInt::zero() };
        delta + BigInt::from(c) * &vb[i] * &row[j]
    })
}

/// A random element of `Sp(m, Z)` as a product of form-preserving transvections.
pub fn random_symplectic(rng: &mut ChaCha8Rng, m: &[i64], steps: usize) -> IntMatrix {
    let lambda = canonical_skew(m, 0).into_inner();
    let r = lambda.nrows();
    let mut a = IntMatrix::identity(r);
    for _ in 0..steps {
        let v: Vec<i64> = (0..r).map(|_| rng.gen_range(-1..=1)).collect();
        let c = if rng.gen_bool(0.5) { 1 } else { -1 };
        a = a.mul(&symplectic_transvection(&lambda, &v, c)).expect("square");
    }
    a
}

/// `[[A, B], [C, D]]` from blocks of sizes `r` and `n - r`.
pub fn block_matrix(a: &IntMatrix, b: &IntMatrix, c: &IntMatrix, d: &IntMatrix) -> IntMatrix {
    let r = a.nrows();
    let n = r + d.nrows();
    IntMatrix::from_fn(n, n, |i, j| match (i < r, j < r) {
        (true, true) => a[(i, j)].clone(),
        (true, false) => b[(i, j - r)].clone(),
        (false, true) => c[(i - r, j)].clone(),
        (false, false) => d[(i - r, j - r)].clone(),
    })
}

pub fn random_block(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64, scale: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(scale * rng.gen_range(-bound..=bound)))
}

/// A member of `Q(m, Z)` (`scale = 0`) or `Q_ell(m, Z)` (`scale = ell`): a
/// symplectic `A`, unimodular `D`, arbitrary `C` and `B = scale * B'`,
/// multiplied by an upper block-unipotent factor so that `B` is actually used.
pub fn random_q_member(rng: &mut ChaCha8Rng, m: &[i64], central: usize, scale: i64) -> IntMatrix {
    random_q_member_with(rng, m, central, scale, 4)
}

/// [`random_q_member`] with `steps` transvections in the symplectic block.
pub fn random_q_member_with(rng: &mut ChaCha8Rng, m: &[i64], central: usize, scale: i64, steps: usize) -> IntMatrix {
    let r = 2 * m.len();
    let a = random_symplectic(rng, m, steps);
    let d = random_unimodular(rng, central, steps.min(3));
    let c = random_block(rng, central, r, 2, 1);
    let lower = block_matrix(&a, &IntMatrix::zeros(r, central), &c, &d);
    if central == 0 || scale == 0 {
        return lower;
    }
    let upper = block_matrix(
        &IntMatrix::identity(r),
        &random_block(rng, r, central, 1, scale),
        &IntMatrix::zeros(central, r),
        &IntMatrix::identity(central),
    );
    upper.mul(&lower).expect("square")
}

/// Determinant by fraction-free elimination.
pub fn oracle_det(m: &IntMatrix) -> BigInt {
    let n = m.nrows();
    let mut a: Vec<Vec<BigInt>> = m.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// Pfaffian by expansion along the first row.
pub fn oracle_pfaffian(h: &[Vec<BigInt>]) -> BigInt {
    let n = h.len();
    if n == 0 {
        return BigInt::one();
    }
    if n % 2 == 1 {
        return BigInt::zero();
    }
    let mut total = BigInt::zero();
    for j in 1..n {
        if h[0][j].is_zero() {
            continue;
        }
        let keep: Vec<usize> = (1..n).filter(|&k| k != j).collect();
        let minor: Vec<Vec<BigInt>> =
            keep.iter().map(|&r| keep.iter().map(|&c| h[r][c].clone()).collect()).collect();
        let term = &h[0][j] * oracle_pfaffian(&minor);
        if j % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn transpose(m: &IntMatrix) -> IntMatrix {
    m.transpose()
}

// ---------------------------------------------------------------------------
// scalars and algebra elements

pub fn random_laurent(rng: &mut ChaCha8Rng, span: i64, bound: i64) -> QLaurent {
    let low = rng.gen_range(-span..=span);
    let len = rng.gen_range(1..=3usize);
    let coeffs: Vec<i64> = (0..len).map(|_| rng.gen_range(-bound..=bound)).collect();
    QLaurent::from_int_coeffs(low, &coeffs)
}

/// A random element of `Q(q)`, zero about one time in ten.
pub fn random_qrational(rng: &mut ChaCha8Rng) -> QRational {
    if rng.gen_ratio(1, 10) {
        return QRational::zero();
    }
    let num = random_laurent(rng, 2, 3);
    if num.is_zero() || rng.gen_bool(0.4) {
        return QRational::from(num);
    }
    let den = loop {
        let d = random_laurent(rng, 1, 3);
        if !d.is_zero() {
            break d;
        }
    };
    QRational::new(num, den).expect("nonzero denominator")
}

pub fn nonzero_qrational(rng: &mut ChaCha8Rng) -> QRational {
    loop {
        let r = random_qrational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// A random scalar in `mode`; at a root of unity, a Laurent polynomial reduced
/// modulo the cyclotomic polynomial.
pub fn random_scalar(rng: &mut ChaCha8Rng, mode: ScalarMode) -> Scalar {
    match mode {
        ScalarMode::Generic => Scalar::Generic(random_qrational(rng)),
        ScalarMode::Root(_) => {
            Scalar::from_qrational(mode, &QRational::from(random_laurent(rng, 3, 3))).expect("polynomial")
        }
    }
}

pub fn nonzero_scalar(rng: &mut ChaCha8Rng, mode: ScalarMode) -> Scalar {
    loop {
        let s = random_scalar(rng, mode);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn random_exponent(rng: &mut ChaCha8Rng, pres: &Presentation, bound: i64) -> Vec<i64> {
    let low = if pres.kind() == AlgebraKind::Polynomial { 0 } else { -bound };
    (0..pres.n()).map(|_| rng.gen_range(low..=bound)).collect()
}

pub fn random_element(rng: &mut ChaCha8Rng, pres: &Arc<Presentation>, max_terms: usize, bound: i64) -> AlgebraElement {
    let len = rng.gen_range(0..=max_terms);
    let terms: Vec<(Vec<i64>, Scalar)> =
        (0..len).map(|_| (random_exponent(rng, pres, bound), random_scalar(rng, pres.mode()))).collect();
    AlgebraElement::from_terms(pres, terms).expect("valid terms")
}

pub fn presentation(h: SkewMatrix, kind: AlgebraKind, mode: ScalarMode) -> Arc<Presentation> {
    Presentation::new(h, kind, mode).expect("valid presentation")
}

// ---------------------------------------------------------------------------
// series and operators

/// A series with `len` random coefficients from `val` on, known to `prec`.
pub fn random_series(rng: &mut ChaCha8Rng, val: i64, len: i64, prec: i64) -> LaurentSeries {
    let terms: Vec<(i64, QRational)> = (val..val + len).map(|e| (e, random_qrational(rng))).collect();
    LaurentSeries::from_terms(1, terms, Some(prec))
}

/// A unit series `c x^v (1 + ...)` with a nonzero leading coefficient.
pub fn random_unit_series(rng: &mut ChaCha8Rng, val: i64, len: i64, prec: i64) -> LaurentSeries {
    let mut terms: Vec<(i64, QRational)> = vec![(val, nonzero_qrational(rng))];
    terms.extend((val + 1..val + len).map(|e| (e, random_qrational(rng))));
    LaurentSeries::from_terms(1, terms, Some(prec))
}

/// `sum_{j in lo..=hi} a_j(x) y^j` with nonzero end coefficients.
pub fn random_operator(rng: &mut ChaCha8Rng, lo: i64, hi: i64, prec: i64) -> QDiffOperator {
    let terms: Vec<(i64, LaurentSeries)> = (lo..=hi)
        .map(|j| {
            let v = rng.gen_range(-2..=2);
            let len = rng.gen_range(1..=3);
            let s = if j == lo || j == hi {
                random_unit_series(rng, v, len, prec)
            } else {
                random_series(rng, v, len, prec)
            };
            (j, s)
        })
        .collect();
    QDiffOperator::from_terms(1, terms)
}

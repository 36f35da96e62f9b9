//! Canonical form of a skew-symmetric integer matrix under unimodular
//! congruence, and what it gives for free: Pfaffian, rank and kernel lattice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntMatrix, SkewMatrix};
use crate::error::{Error, Result};

/// `W H W^T = diag(m_1 S, ..., m_N S, 0, ..., 0)` with `S = [[0,1],[-1,0]]`,
/// positive `m_1 | m_2 | ... | m_N` and `rank = 2N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalDecomposition {
    pub w: IntMatrix,
    pub m: Vec<BigInt>,
    pub rank: usize,
    /// `det W`, either 1 or -1.
    pub det_sign: i8,
}

impl CanonicalDecomposition {
    /// The block-diagonal matrix `W H W^T`.
    pub fn canonical_matrix(&self) -> SkewMatrix {
        SkewMatrix::standard(&self.m, self.w.nrows()).expect("blocks fit by construction")
    }
}

struct Reducer {
    h: Vec<Vec<BigInt>>,
    w: Vec<Vec<BigInt>>,
    sign: i8,
    n: usize,
}

impl Reducer {
    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.h.swap(i, j);
        for row in self.h.iter_mut() {
            row.swap(i, j);
        }
        self.w.swap(i, j);
        self.sign = -self.sign;
    }

    fn negate(&mut self, i: usize) {
        for x in self.h[i].iter_mut() {
            *x = -&*x;
        }
        for row in self.h.iter_mut() {
            row[i] = -&row[i];
        }
        for x in self.w[i].iter_mut() {
            *x = -&*x;
        }
        self.sign = -self.sign;
    }

    /// Index `k` becomes `k + t * l` (rows and columns alike).
    fn add(&mut self, k: usize, l: usize, t: &BigInt) {
        if t.is_zero() {
            return;
        }
        for c in 0..self.n {
            let v = &self.h[l][c] * t;
            self.h[k][c] += v;
        }
        for r in 0..self.n {
            let v = &self.h[r][l] * t;
            self.h[r][k] += v;
        }
        for c in 0..self.n {
            let v = &self.w[l][c] * t;
            self.w[k][c] += v;
        }
    }

    fn smallest_from(&self, p: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in p..self.n {
            for j in i + 1..self.n {
                let v = &self.h[i][j];
                if v.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| v.abs() < self.h[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn move_pivot(&mut self, p: usize, (i, j): (usize, usize)) {
        self.swap(p, i);
        let j = if j == p { i } else { j };
        self.swap(p + 1, j);
        if self.h[p][p + 1].is_negative() {
            self.negate(p + 1);
        }
    }

    /// Clears rows/columns `p, p+1` beyond the pivot; returns false if a
    /// remainder smaller than the pivot was left behind.
    fn clear(&mut self, p: usize) -> bool {
        let d = self.h[p][p + 1].clone();
        let mut clean = true;
        for k in p + 2..self.n {
            if !self.h[p][k].is_zero() {
                let t = self.h[p][k].div_floor(&d);
                self.add(k, p + 1, &-t);
                clean &= self.h[p][k].is_zero();
            }
            if !self.h[p + 1][k].is_zero() {
                let t = self.h[p + 1][k].div_floor(&d);
                self.add(k, p, &t);
                clean &= self.h[p + 1][k].is_zero();
            }
        }
        clean
    }

    fn non_divisible_from(&self, p: usize, d: &BigInt) -> Option<usize> {
        (p..self.n).find(|&i| (p..self.n).any(|j| !self.h[i][j].is_multiple_of(d)))
    }

    fn run(&mut self) -> Vec<BigInt> {
        let mut m = Vec::new();
        let mut p = 0;
        while p + 1 < self.n {
            let Some(pos) = self.smallest_from(p) else { break };
            self.move_pivot(p, pos);
            loop {
                if !self.clear(p) {
                    let pos = self.smallest_from(p).expect("a nonzero remainder exists");
                    self.move_pivot(p, pos);
                    continue;
                }
                let d = self.h[p][p + 1].clone();
                if let Some(i) = self.non_divisible_from(p + 2, &d) {
                    // pull the offending row into the pivot row so the next
                    // clearing pass leaves a smaller remainder
                    self.add(p, i, &BigInt::one());
                    continue;
                }
                break;
            }
            m.push(self.h[p][p + 1].clone());
            p += 2;
        }
        m
    }
}

pub fn canonical_form(h: &SkewMatrix) -> CanonicalDecomposition {
    let n = h.dim();
    let mut r = Reducer {
        h: h.to_rows(),
        w: IntMatrix::identity(n).to_rows(),
        sign: 1,
        n,
    };
    let m = r.run();
    let rank = 2 * m.len();
    let w = IntMatrix::from_rows(&r.w).expect("square");
    CanonicalDecomposition { w, m, rank, det_sign: r.sign }
}

/// Pfaffian by recursive expansion along the first row.
pub fn pfaffian_expansion(h: &SkewMatrix) -> BigInt {
    fn rec(h: &IntMatrix, idx: &[usize]) -> BigInt {
        if idx.is_empty() {
            return BigInt::one();
        }
        if idx.len() % 2 == 1 {
            return BigInt::zero();
        }
        let first = idx[0];
        let mut acc = BigInt::zero();
        for (k, &j) in idx.iter().enumerate().skip(1) {
            let a = &h[(first, j)];
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = idx.iter().copied().filter(|&x| x != first && x != j).collect();
            let term = a * rec(h, &rest);
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }
    let idx: Vec<usize> = (0..h.dim()).collect();
    rec(h.matrix(), &idx)
}

/// Pfaffian via the canonical form, cross-checked against the expansion for
/// small sizes.
pub fn pfaffian(h: &SkewMatrix) -> Result<BigInt> {
    let n = h.dim();
    let pf = if n % 2 == 1 {
        BigInt::zero()
    } else {
        let cd = canonical_form(h);
        if cd.rank < n {
            BigInt::zero()
        } else {
            let prod: BigInt = cd.m.iter().product();
            prod * BigInt::from(cd.det_sign)
        }
    };
    if n <= 8 && pf != pfaffian_expansion(h) {
        return Err(Error::Internal(format!("Pfaffian mismatch for {}", h.matrix())));
    }
    Ok(pf)
}

/// A lattice basis of `{alpha : H alpha = 0}`: the last `n - rank` rows of `W`.
pub fn kernel_basis(h: &SkewMatrix) -> Vec<Vec<BigInt>> {
    let cd = canonical_form(h);
    (cd.rank..h.dim()).map(|i| cd.w.row(i).to_vec()).collect()
}

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::intlinalg::SkewMatrix;
use crate::qscalar::ScalarMode;

/// Polynomial (`A_q[H]`) or Laurent (`L_q[H]`) algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    Polynomial,
    Laurent,
}

/// Generators `x_1, ..., x_n` subject to `x_i x_j = q^{h_ij} x_j x_i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    h: SkewMatrix,
    small: Vec<Vec<i64>>,
    kind: AlgebraKind,
    mode: ScalarMode,
}

impl Presentation {
    pub fn new(h: SkewMatrix, kind: AlgebraKind, mode: ScalarMode) -> Result<Arc<Self>> {
        let small = h.to_i64_rows()?;
        if let ScalarMode::Root(0) = mode {
            return Err(Error::domain("root of unity order must be positive"));
        }
        Ok(Arc::new(Presentation { h, small, kind, mode }))
    }

    /// The quantum plane / quantum torus: `x y = q y x`.
    pub fn quantum_plane(kind: AlgebraKind, mode: ScalarMode) -> Arc<Self> {
        let s = SkewMatrix::standard(&[BigInt::from(1)], 2).expect("2x2");
        Self::new(s, kind, mode).expect("small entries")
    }

    pub fn n(&self) -> usize {
        self.small.len()
    }

    pub fn h(&self) -> &SkewMatrix {
        &self.h
    }

    pub fn h_entry(&self, i: usize, j: usize) -> i64 {
        self.small[i][j]
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn mode(&self) -> ScalarMode {
        self.mode
    }

    pub fn with_mode(&self, mode: ScalarMode) -> Arc<Self> {
        Arc::new(Presentation { mode, ..self.clone() })
    }

    pub fn with_kind(&self, kind: AlgebraKind) -> Arc<Self> {
        Arc::new(Presentation { kind, ..self.clone() })
    }

    /// Normal-ordering exponent: `x^a x^b = q^{twist(a,b)} x^{a+b}` with
    /// `twist(a, b) = sum_{i>j} h_ij a_i b_j`.
    pub fn twist(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        let mut acc: i128 = 0;
        for i in 0..self.n() {
            if a[i] == 0 {
                continue;
            }
            for j in 0..i {
                acc += self.small[i][j] as i128 * a[i] as i128 * b[j] as i128;
            }
        }
        i64::try_from(acc).map_err(|_| Error::Overflow("normal-ordering exponent".into()))
    }

    /// `a^T H b`, so that `x^a x^b = q^{a^T H b} x^b x^a`.
    pub fn commutation_exponent(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        let mut acc: i128 = 0;
        for i in 0..self.n() {
            for j in 0..self.n() {
                acc += a[i] as i128 * self.small[i][j] as i128 * b[j] as i128;
            }
        }
        i64::try_from(acc).map_err(|_| Error::Overflow("commutation exponent".into()))
    }

    /// Display name of generator `i` (`x`, `y` in two variables).
    pub fn generator_name(&self, i: usize) -> String {
        if self.n() == 2 {
            ["x", "y"][i].to_string()
        } else {
            format!("x{}", i + 1)
        }
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        if self.n() == 2 {
            match name {
                "x" => return Some(0),
                "y" => return Some(1),
                _ => {}
            }
        }
        let idx: usize = name.strip_prefix('x')?.parse().ok()?;
        (1..=self.n()).contains(&idx).then(|| idx - 1)
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presentation({:?}, {}, H = {})", self.kind, self.mode, self.h.matrix())
    }
}

//! Automorphisms `tau_c tau_M` of quasi Laurent polynomial algebras: generator
//! `i` goes to `c_i x^{column_i(M)}`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::intlinalg::{q_membership, IntMatrix, SkewMatrix};
use crate::qalgebra::{AlgebraElement, Presentation};
use crate::qscalar::{Scalar, ScalarMode};

#[derive(Clone, PartialEq, Eq)]
pub struct Automorphism {
    pres: Arc<Presentation>,
    c: Vec<Scalar>,
    m: IntMatrix,
}

/// Outcome of [`Automorphism::verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub mode: ScalarMode,
    /// Relations preserved, equivalently `M^T H M = H` (mod `ell` at a root of unity).
    pub is_automorphism: bool,
    /// `Q(m, Z)` / `Q_ell(m, Z)` membership when `H` is in canonical form and
    /// the level is admissible.
    pub q_membership: Option<bool>,
}

impl Automorphism {
    pub fn new(pres: &Arc<Presentation>, c: Vec<Scalar>, m: IntMatrix) -> Result<Self> {
        let n = pres.n();
        if c.len() != n || m.nrows() != n || m.ncols() != n {
            return Err(Error::dim(format!("need {n} scalars and an {n}x{n} matrix")));
        }
        if !m.is_unimodular()? {
            return Err(Error::NotUnimodular(m.determinant()?.to_string()));
        }
        let c = c.iter().map(|x| x.to_mode(pres.mode())).collect::<Result<Vec<_>>>()?;
        if c.iter().any(Scalar::is_zero) {
            return Err(Error::domain("torus scalars must be nonzero"));
        }
        Ok(Automorphism { pres: pres.clone(), c, m })
    }

    pub fn identity(pres: &Arc<Presentation>) -> Self {
        Self::from_matrix(pres, IntMatrix::identity(pres.n())).expect("identity is unimodular")
    }

    /// `tau_M` with all `c_i = 1`.
    pub fn from_matrix(pres: &Arc<Presentation>, m: IntMatrix) -> Result<Self> {
        Self::new(pres, vec![Scalar::one(pres.mode()); pres.n()], m)
    }

    /// The torus element `tau_c`.
    pub fn torus(pres: &Arc<Presentation>, c: Vec<Scalar>) -> Result<Self> {
        Self::new(pres, c, IntMatrix::identity(pres.n()))
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn scalars(&self) -> &[Scalar] {
        &self.c
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn is_torus(&self) -> bool {
        self.m == IntMatrix::identity(self.pres.n())
    }

    pub fn is_identity(&self) -> bool {
        self.is_torus() && self.c.iter().all(Scalar::is_one)
    }

    /// `c_i x^{column_i(M)}` for every generator, in the algebra `pres`.
    fn images_in(&self, pres: &Arc<Presentation>) -> Result<Vec<AlgebraElement>> {
        let cols = self.m.transpose().to_i64_rows()?;
        cols.into_iter()
            .zip(&self.c)
            .map(|(col, c)| AlgebraElement::monomial(pres, col, c.to_mode(pres.mode())?))
            .collect()
    }

    pub fn generator_images(&self) -> Result<Vec<AlgebraElement>> {
        self.images_in(&self.pres)
    }

    /// Applies the map without checking that it preserves the relations.
    pub fn apply(&self, f: &AlgebraElement) -> Result<AlgebraElement> {
        if f.presentation() != &self.pres {
            return Err(Error::domain("element and automorphism live in different algebras"));
        }
        f.substitute(&self.generator_images()?)
    }

    /// Applies the map after confirming it is an automorphism.
    pub fn apply_checked(&self, f: &AlgebraElement) -> Result<AlgebraElement> {
        if !self.verify(self.pres.mode())?.is_automorphism {
            return Err(Error::domain(format!("{self} does not preserve the defining relations")));
        }
        self.apply(f)
    }

    /// Checks relation preservation on generator pairs by multiplying the
    /// images, and independently the congruence `M^T H M = H`; the two must agree.
    pub fn verify(&self, mode: ScalarMode) -> Result<Verification> {
        let pres = if mode == self.pres.mode() { self.pres.clone() } else { self.pres.with_mode(mode) };
        let images = self.images_in(&pres)?;
        let n = pres.n();
        let mut relations = true;
        'pairs: for i in 0..n {
            for j in i + 1..n {
                let lhs = images[i].normal_mul(&images[j])?;
                let rhs = images[j].normal_mul(&images[i])?.scale(&Scalar::q_pow(mode, pres.h_entry(i, j)));
                if lhs != rhs {
                    relations = false;
                    break 'pairs;
                }
            }
        }
        let h = pres.h().matrix();
        let moved = self.m.congruence(h)?;
        let congruence = match mode {
            ScalarMode::Generic => &moved == h,
            ScalarMode::Root(ell) => moved.eq_mod(h, ell),
        };
        if relations != congruence {
            return Err(Error::Internal(format!(
                "relation check ({relations}) and congruence check ({congruence}) disagree for {self}"
            )));
        }
        let membership = match canonical_factors(pres.h()) {
            Some(m) => match q_membership(&self.m, &m, mode) {
                Ok(b) => Some(b),
                Err(Error::LevelNotCoprime { .. }) => None,
                Err(e) => return Err(e),
            },
            None => None,
        };
        Ok(Verification { mode, is_automorphism: relations, q_membership: membership })
    }

    /// `self ∘ other`: `x_i -> self(c'_i x^{column_i(M')}) = c''_i x^{column_i(M M')}`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        if self.pres != other.pres {
            return Err(Error::domain("automorphisms of different algebras"));
        }
        let m = self.m.mul(&other.m)?;
        let mut c = Vec::with_capacity(self.pres.n());
        for img in other.generator_images()? {
            let moved = self.apply(&img)?;
            let (_, coeff) = moved.single_term().ok_or_else(|| Error::Internal("image is not a monomial".into()))?;
            c.push(coeff.clone());
        }
        Automorphism::new(&self.pres, c, m)
    }

    /// The two-sided inverse: matrix `M^-1`, scalars chosen so that
    /// `self ∘ inverse` fixes every generator.
    pub fn invert(&self) -> Result<Automorphism> {
        let m_inv = self.m.inverse_unimodular()?;
        let probe = Automorphism::from_matrix(&self.pres, m_inv.clone())?;
        let mut c = Vec::with_capacity(self.pres.n());
        for img in probe.generator_images()? {
            let moved = self.apply(&img)?;
            let (_, kappa) = moved.single_term().ok_or_else(|| Error::Internal("image is not a monomial".into()))?;
            c.push(kappa.inv()?);
        }
        Automorphism::new(&self.pres, c, m_inv)
    }

    /// `{"c": [".."], "M": [[..]]}`.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<Value>> = self
            .m
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|x| serde_json::from_str(&x.to_string()).expect("integer")).collect())
            .collect();
        json!({ "c": self.c.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "M": rows })
    }
}

/// `Some(m)` when `H = diag(m_1 S, ..., m_N S, 0, ..., 0)` with positive `m_i`.
pub fn canonical_factors(h: &SkewMatrix) -> Option<Vec<BigInt>> {
    let n = h.dim();
    let mut m = Vec::new();
    while 2 * m.len() + 1 < n && h[(2 * m.len(), 2 * m.len() + 1)].is_positive() {
        m.push(h[(2 * m.len(), 2 * m.len() + 1)].clone());
    }
    let standard = SkewMatrix::standard(&m, n).ok()?;
    (standard.matrix() == h.matrix() && (!m.is_empty() || h.matrix().is_zero()) && m.iter().all(|x| !x.is_zero()))
        .then_some(m)
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.c.iter().map(|x| x.to_string()).collect();
        write!(f, "tau_c tau_M with c = ({}), M = {}", c.join(", "), self.m)
    }
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Automorphism({self})")
    }
}

//! Twisted derivations and grading maps of `A_q(2)`.

use super::{AlgebraElement, AlgebraKind};
use crate::error::{Error, Result};
use crate::qscalar::{qint, QRational, Scalar, ScalarMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QDerivation {
    Dx,
    Dy,
    TauX,
    TauY,
    TauXInv,
    TauYInv,
}

impl QDerivation {
    pub const ALL: [QDerivation; 6] = [
        QDerivation::Dx,
        QDerivation::Dy,
        QDerivation::TauX,
        QDerivation::TauY,
        QDerivation::TauXInv,
        QDerivation::TauYInv,
    ];
}

fn qint_scalar(mode: ScalarMode, n: i64) -> Result<Scalar> {
    Scalar::from_qrational(mode, &QRational::from(qint(n)))
}

/// Applies one of `D_x, D_y, tau_x^{+-1}, tau_y^{+-1}` to an element of `A_q(2)`.
pub fn apply_derivation(which: QDerivation, f: &AlgebraElement) -> Result<AlgebraElement> {
    let pres = f.presentation();
    if pres.n() != 2 || pres.h_entry(0, 1) != 1 || pres.kind() != AlgebraKind::Polynomial {
        return Err(Error::domain(format!("derivations act on A_q(2) only, got {pres:?}")));
    }
    let mode = pres.mode();
    let mut terms = Vec::with_capacity(f.len());
    for (alpha, c) in f.terms() {
        let (a, b) = (alpha[0], alpha[1]);
        let term = match which {
            QDerivation::Dx => (vec![a - 1, b], c * &qint_scalar(mode, a)?),
            QDerivation::Dy => {
                // c x^a y^b = c q^{ab} y^b x^a -> c q^{ab} [b] y^{b-1} x^a,
                // and y^{b-1} x^a = q^{-a(b-1)} x^a y^{b-1}
                let as_yx = c.shift(a * b);
                let stepped = &as_yx * &qint_scalar(mode, b)?;
                (vec![a, b - 1], stepped.shift(-a * (b - 1)))
            }
            QDerivation::TauX => (alpha.to_vec(), c.shift(a)),
            QDerivation::TauY => (alpha.to_vec(), c.shift(b)),
            QDerivation::TauXInv => (alpha.to_vec(), c.shift(-a)),
            QDerivation::TauYInv => (alpha.to_vec(), c.shift(-b)),
        };
        // [0] = 0 kills the would-be negative exponent
        if !term.1.is_zero() {
            terms.push(term);
        }
    }
    AlgebraElement::from_terms(pres, terms)
}

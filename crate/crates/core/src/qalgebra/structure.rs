//! Structure data: changes of variables, the splitting of `L_q[H]` into rank
//! two quantum tori and a centre, gradings and step operators of `A_q(2)`.

use std::sync::Arc;

use super::{AlgebraElement, AlgebraKind, Presentation};
use crate::error::{Error, Result};
use crate::intlinalg::{canonical_form, coprime_ladder, IntMatrix};
use crate::qscalar::{Scalar, ScalarMode};

/// The algebra map of a change of variables `P^T H P = H'`: generator `i` of
/// the `H'` algebra goes to `x^{column_i(P)}` in the `H` algebra.
pub fn transport(p: &IntMatrix, target: &Arc<Presentation>, f: &AlgebraElement) -> Result<AlgebraElement> {
    let source = f.presentation();
    if p.nrows() != target.n() || p.ncols() != source.n() {
        return Err(Error::dim(format!("P must be {}x{}", target.n(), source.n())));
    }
    if &p.congruence(target.h())? != source.h().matrix() {
        return Err(Error::domain("P^T H P differs from the source matrix"));
    }
    if !p.is_unimodular()? {
        return Err(Error::NotUnimodular(p.determinant()?.to_string()));
    }
    let cols = p.transpose().to_i64_rows()?;
    let images: Vec<AlgebraElement> = cols
        .into_iter()
        .map(|col| AlgebraElement::monomial(target, col, Scalar::one(target.mode())))
        .collect::<Result<_>>()?;
    f.substitute(&images)
}

/// One rank-two factor `L_{q^m}(2)` inside `L_q[H]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorPair {
    pub first: Vec<i64>,
    pub second: Vec<i64>,
    pub twist: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationData {
    pub pairs: Vec<GeneratorPair>,
    pub central: Vec<Vec<i64>>,
}

/// Reads the splitting off the canonical form with `P = W^T` and checks every
/// pairwise commutation exponent.
pub fn factorization_data(pres: &Presentation) -> Result<FactorizationData> {
    let cd = canonical_form(pres.h());
    let rows = cd.w.to_i64_rows()?;
    let m: Vec<i64> = cd.m.iter().map(|x| i64::try_from(x.clone())).collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Overflow("invariant factor".into()))?;
    let pairs: Vec<GeneratorPair> = m
        .iter()
        .enumerate()
        .map(|(i, &twist)| GeneratorPair { first: rows[2 * i].clone(), second: rows[2 * i + 1].clone(), twist })
        .collect();
    let central: Vec<Vec<i64>> = rows[cd.rank..].to_vec();

    for (i, a) in rows.iter().enumerate() {
        for (j, b) in rows.iter().enumerate() {
            let expected = match (i / 2 == j / 2 && i < cd.rank && j < cd.rank, i % 2, j % 2) {
                (true, 0, 1) => m[i / 2],
                (true, 1, 0) => -m[i / 2],
                _ => 0,
            };
            let got = pres.commutation_exponent(a, b)?;
            if got != expected {
                return Err(Error::Internal(format!("exponent {got} between rows {i}, {j} of W, expected {expected}")));
            }
        }
    }
    Ok(FactorizationData { pairs, central })
}

/// `wt(c, d) = det [[a, b], [c, d]]`: `K x^c y^d = q^wt x^c y^d K` for `K = x^a y^b`.
pub fn graded_degree(c: i64, d: i64, a: i64, b: i64) -> Result<i64> {
    if a == 0 && b == 0 {
        return Err(Error::domain("grading pair must be nonzero"));
    }
    let w = a as i128 * d as i128 - b as i128 * c as i128;
    i64::try_from(w).map_err(|_| Error::Overflow("degree".into()))
}

/// `K = x^a y^b`, `Xhat = x^{a-v} y^{b-u}`, `Yhat = x^v y^u` with `au - bv = 1`.
#[derive(Clone, Debug)]
pub struct StepTriple {
    pub a: i64,
    pub b: i64,
    pub u: i64,
    pub v: i64,
    pub k: AlgebraElement,
    pub xhat: AlgebraElement,
    pub yhat: AlgebraElement,
}

/// Builds the step operators inside the quantum torus and checks every
/// ladder relation, including those involving `K^{-1}`.
pub fn step_operators(a: i64, b: i64, mode: ScalarMode) -> Result<StepTriple> {
    let (u, v) = coprime_ladder(a, b)?;
    let torus = Presentation::quantum_plane(AlgebraKind::Laurent, mode);
    let mono = |e: [i64; 2]| AlgebraElement::monomial(&torus, e.to_vec(), Scalar::one(mode));
    let k = mono([a, b])?;
    let xhat = mono([a - v, b - u])?;
    let yhat = mono([v, u])?;
    let x = AlgebraElement::generator(&torus, 0);
    let y = AlgebraElement::generator(&torus, 1);
    let k_inv = k.inverse().ok_or(Error::NotUnit)?;
    let q = |e: i64| Scalar::q_pow(mode, e);

    let checks: [(&str, AlgebraElement, AlgebraElement); 7] = [
        ("Xhat Yhat = q^{-v(b-u)} K", &xhat * &yhat, k.scale(&q(-v * (b - u)))),
        ("Yhat Xhat = q^{-u(a-v)} K", &yhat * &xhat, k.scale(&q(-u * (a - v)))),
        ("Xhat Yhat = q Yhat Xhat", &xhat * &yhat, (&yhat * &xhat).scale(&q(1))),
        ("K Xhat = q^-1 Xhat K", &k * &xhat, (&xhat * &k).scale(&q(-1))),
        ("K Yhat = q Yhat K", &k * &yhat, (&yhat * &k).scale(&q(1))),
        ("K^-1 x = q^b x K^-1", &k_inv * &x, (&x * &k_inv).scale(&q(b))),
        ("K^-1 y = q^-a y K^-1", &k_inv * &y, (&y * &k_inv).scale(&q(-a))),
    ];
    for (name, lhs, rhs) in checks {
        if lhs != rhs {
            return Err(Error::Internal(format!("step relation {name} fails for ({a}, {b}): {lhs} vs {rhs}")));
        }
    }
    Ok(StepTriple { a, b, u, v, k, xhat, yhat })
}

//! Exact scalars: Laurent polynomials and rational functions in `q`, and their
//! specializations at roots of unity.

mod cyclotomic;
pub mod expr;
mod laurent;
mod rational;
mod scalar;
pub(crate) mod zpoly;

pub use cyclotomic::CyclotomicScalar;
pub use laurent::{cyclotomic, qfactorial, qint, QLaurent};
pub use rational::QRational;
pub use scalar::{MonomialScalar, Scalar, ScalarMode};

/// `Some(c * q^e)` when `a` is a single term.
pub fn monomial_test(a: &QRational) -> Option<MonomialScalar> {
    a.as_monomial()
}

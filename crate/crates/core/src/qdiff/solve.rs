//! First-order equations `(y^n - a(x)) f = 0` and their ramified variant.

use num_integer::Integer;

use super::operator::QDiffOperator;
use super::series::LaurentSeries;
use crate::error::{Error, Result};
use crate::qscalar::QRational;

/// `f = scale * x^{k/denom} * exp(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstOrderSolution {
    pub denom: u32,
    /// Leading exponent in units of `1/denom`.
    pub k: i64,
    /// Zero constant term.
    pub g: LaurentSeries,
    pub scale: QRational,
}

impl FirstOrderSolution {
    /// The solution as one series.
    pub fn series(&self, cap: i64) -> Result<LaurentSeries> {
        Ok(self.g.exp(cap)?.shift(self.k).scale(&self.scale))
    }

    /// `k` as a reduced fraction `(num, den)`.
    pub fn exponent(&self) -> (i64, i64) {
        let d = i64::from(self.denom);
        let g = self.k.gcd(&d);
        (self.k / g, d / g)
    }
}

/// `y^n - a(x)`.
pub fn first_order_operator(n: i64, a: &LaurentSeries) -> QDiffOperator {
    &QDiffOperator::y_pow(a.denom(), n) - &QDiffOperator::from_series(a.clone())
}

/// Checks `P f = 0` to relative order `t`: the residual must be known, and
/// zero, below `val(f) + t`.
pub fn verify_annihilation(p: &QDiffOperator, f: &LaurentSeries, t: i64) -> bool {
    let Some(v) = f.valuation() else {
        // nothing to annihilate
        return true;
    };
    p.apply(f).vanishes_below(v + t)
}

/// Solves `(y^n - a) f = 0` for `a` of valuation 0. The only obstruction is
/// the leading coefficient: `a(0)` must be exactly `q^{-nk}`, with `q^{1/d}`
/// playing the role of `q` for a ramified `a`.
pub fn solve_first_order(n: i64, a: &LaurentSeries, t: i64) -> Result<Vec<FirstOrderSolution>> {
    if n == 0 {
        return Err(Error::domain("the power of y must be nonzero"));
    }
    if a.valuation() != Some(0) {
        return Err(Error::domain(format!("a(x) must have valuation 0, got {a}")));
    }
    let d = a.denom();
    // x^{k/d} has y^n-eigenvalue q^{-nk/d} = p^{-nk}
    let lead = a.coeff(0);
    let k = match lead.as_monomial() {
        Some(m) if num_traits::One::is_one(&m.coeff) && m.exp % n == 0 => -m.exp / n,
        _ => return Ok(Vec::new()),
    };
    let normalized = a.scale(&QRational::q_pow(n * k));
    let alpha = normalized.log(t)?;
    let terms: Vec<(i64, QRational)> = alpha
        .terms()
        .map(|(i, c)| Ok((i, c * &(&QRational::q_pow(-n * i) - &QRational::one()).inv()?)))
        .collect::<Result<_>>()?;
    let g = LaurentSeries::from_terms(d, terms, alpha.prec());
    let sol = FirstOrderSolution { denom: d, k, g, scale: QRational::one() };
    let f = sol.series(t)?;
    if !verify_annihilation(&first_order_operator(n, a), &f, t) {
        return Err(Error::Internal(format!("first-order solution for n={n}, a={a} failed verification")));
    }
    Ok(vec![sol])
}

/// Solves `(y^n - a) f = 0` with `a(0) = q^k` and `gcd(n, k) = 1` through
/// `f = x^{-k/n} g` and `(y^n - q^-k a) g = 0`. The result lives over
/// `x^{1/n}`.
pub fn solve_ramified(n: i64, k: i64, a: &LaurentSeries, t: i64) -> Result<FirstOrderSolution> {
    if n <= 0 {
        return Err(Error::domain(format!("ramification needs n > 0, got {n}")));
    }
    if n.gcd(&k) != 1 {
        return Err(Error::NotCoprime(n, k));
    }
    if a.denom() != 1 {
        return Err(Error::domain("a(x) must be an ordinary series in x"));
    }
    if a.valuation() != Some(0) || a.coeff(0) != QRational::q_pow(k) {
        return Err(Error::domain(format!("a(0) must equal q^{k}, got {}", a.coeff(0))));
    }
    let reduced = a.scale(&QRational::q_pow(-k));
    let g = solve_first_order(n, &reduced, t)?
        .pop()
        .ok_or_else(|| Error::Internal("reduced equation lost its solution".into()))?;
    debug_assert_eq!(g.k, 0);
    let d = u32::try_from(n).map_err(|_| Error::Overflow(format!("ramification index {n}")))?;
    let sol = FirstOrderSolution { denom: d, k: -k, g: g.g.lift(d)?, scale: g.scale };
    let f = sol.series(t * n)?;
    if !verify_annihilation(&first_order_operator(n, &a.lift(d)?), &f, t * n) {
        return Err(Error::Internal(format!("ramified solution for n={n}, k={k} failed verification")));
    }
    Ok(sol)
}

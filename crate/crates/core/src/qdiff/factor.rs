//! Factorization search `y^2 + a1 y + a2 = (y + alpha)(y + beta)`.

use std::collections::BTreeMap;
use std::fmt;

use super::operator::QDiffOperator;
use super::series::LaurentSeries;
use crate::error::{Error, Result};
use crate::qscalar::QRational;

/// One factorization `P = (y + alpha)(y + beta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorPair {
    pub alpha: LaurentSeries,
    pub beta: LaurentSeries,
    /// Absolute order below which the product was checked against `P`.
    pub checked_to: i64,
}

impl FactorPair {
    pub fn left(&self) -> QDiffOperator {
        linear_factor(&self.alpha)
    }

    pub fn right(&self) -> QDiffOperator {
        linear_factor(&self.beta)
    }

    pub fn product(&self) -> QDiffOperator {
        &self.left() * &self.right()
    }
}

fn linear_factor(c: &LaurentSeries) -> QDiffOperator {
    QDiffOperator::from_terms(c.denom(), [(1, LaurentSeries::one(c.denom())), (0, c.clone())])
}

/// Why a branch of the search was abandoned without a verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchMarker {
    /// The leading quadratic for `val(alpha) = k` has discriminant `disc`,
    /// which is not a square in the coefficient field.
    IrrationalLeading { k: i64, disc: QRational },
    /// The linear step at `x^{k+order}` of `alpha` has a vanishing pivot and
    /// a vanishing right-hand side, so the coefficient is not determined.
    Resonance { k: i64, alpha0: QRational, order: i64 },
}

impl fmt::Display for BranchMarker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchMarker::IrrationalLeading { k, disc } => {
                write!(f, "val(alpha)={k}: leading coefficient needs sqrt({disc})")
            }
            BranchMarker::Resonance { k, alpha0, order } => {
                write!(f, "val(alpha)={k}, alpha0={alpha0}: resonance at order {order}")
            }
        }
    }
}

/// Outcome of [`factor_degree2`]. An empty `factorizations` list means only
/// that no factor with valuation in the window exists over the coefficient
/// field; `markers` lists the branches that could not be decided.
#[derive(Clone, Debug, Default)]
pub struct FactorSearch {
    pub factorizations: Vec<FactorPair>,
    pub markers: Vec<BranchMarker>,
}

/// The coefficients of `y^2 + a1 y + a2`.
fn split_monic(p: &QDiffOperator) -> Result<(LaurentSeries, LaurentSeries)> {
    let d = p.denom();
    let bad = || Error::domain(format!("expected y^2 + a1 y + a2 with a2 != 0, got {p}"));
    if p.terms().any(|(j, _)| !(0..=2).contains(&j)) || p.coeff(2) != Some(&LaurentSeries::one(d)) {
        return Err(bad());
    }
    let a1 = p.coeff(1).cloned().unwrap_or_else(|| LaurentSeries::zero(d));
    let a2 = p.coeff(0).filter(|a| !a.is_zero()).cloned().ok_or_else(bad)?;
    Ok((a1, a2))
}

/// Searches `P = (y + alpha)(y + beta)` with `val(alpha)` in `[kmin, kmax]`.
///
/// Matching `y`-coefficients forces `beta(x) = a1(qx) - alpha(qx)`, so
/// `alpha(x) (a1(qx) - alpha(qx)) = a2(x)` is solved order by order. The
/// leading order is a quadratic in the first coefficient of `alpha`; every
/// later order is linear.
pub fn factor_degree2(p: &QDiffOperator, window: (i64, i64), t: i64) -> Result<FactorSearch> {
    let (a1, a2) = split_monic(p)?;
    let d = p.denom();
    let t = [a1.prec(), a2.prec()].into_iter().flatten().fold(t, i64::min);
    let v1 = a1.valuation();
    let v2 = a2.valuation().expect("a2 nonzero");
    let mut out = FactorSearch::default();
    for k in window.0..=window.1 {
        let lead = [Some(2 * k), v1.map(|v| k + v), Some(v2)].into_iter().flatten().min().expect("nonempty");
        // c2 a^2 + c1 a + c0 = 0 for the leading coefficient a of alpha
        let c2 = if 2 * k == lead { -QRational::q_pow(k) } else { QRational::zero() };
        let c1 = a1.coeff(lead - k).shift(lead - k);
        let c0 = -a2.coeff(lead);
        let roots = match quadratic_roots(&c2, &c1, &c0) {
            Roots::Found(r) => r,
            Roots::Irrational(disc) => {
                out.markers.push(BranchMarker::IrrationalLeading { k, disc });
                continue;
            }
        };
        // a truncated a1 times x^k with k < 0 loses |k| orders
        let checked_to = a1.prec().map_or(t, |pr| t.min(pr + k));
        for alpha0 in roots.into_iter().filter(|r| !r.is_zero()) {
            match continue_branch(&a1, &a2, k, lead, alpha0, checked_to, d) {
                Branch::Solved(alpha) => {
                    let beta = (&a1 - &alpha).scale_q(1);
                    let pair = FactorPair { alpha, beta, checked_to };
                    if !pair.product().agrees_below(p, checked_to) {
                        return Err(Error::Internal(format!("factor pair for val(alpha)={k} fails back-multiplication")));
                    }
                    out.factorizations.push(pair);
                }
                Branch::Resonant(marker) => out.markers.push(marker),
                Branch::Obstructed => {}
            }
        }
    }
    Ok(out)
}

enum Roots {
    Found(Vec<QRational>),
    Irrational(QRational),
}

fn quadratic_roots(c2: &QRational, c1: &QRational, c0: &QRational) -> Roots {
    if c2.is_zero() {
        if c1.is_zero() {
            // c0 = 0 would make every value a root; the caller only reaches
            // this with c0 != 0
            return Roots::Found(Vec::new());
        }
        return Roots::Found(vec![-&(c0 * &c1.inv().expect("nonzero"))]);
    }
    let disc = &(c1 * c1) - &(&QRational::from(4) * &(c2 * c0));
    let Some(s) = disc.sqrt() else {
        return Roots::Irrational(disc);
    };
    let denom = (&QRational::from(2) * c2).inv().expect("nonzero");
    let plus = &(&s - c1) * &denom;
    if s.is_zero() {
        return Roots::Found(vec![plus]);
    }
    let minus = &(&(-&s) - c1) * &denom;
    Roots::Found(vec![plus, minus])
}

enum Branch {
    Solved(LaurentSeries),
    Resonant(BranchMarker),
    Obstructed,
}

/// Extends `alpha = alpha0 x^k + ...` until `alpha * beta` is pinned below `t`.
fn continue_branch(
    a1: &LaurentSeries,
    a2: &LaurentSeries,
    k: i64,
    lead: i64,
    alpha0: QRational,
    t: i64,
    d: u32,
) -> Branch {
    // alpha is needed to order t for the y-coefficient and to order
    // k + t - lead for alpha * beta
    let steps = (t - lead).max(t - k).max(1);
    let mut alpha: BTreeMap<i64, QRational> = BTreeMap::from([(k, alpha0.clone())]);
    // d/d(alpha_n) of the coefficient of x^{lead+n} in alpha (a1 - alpha)(qx)
    let pivot = |n: i64| -> QRational {
        let mut piv = a1.coeff(lead - k).shift(lead - k);
        if 2 * k == lead {
            piv = &piv - &(&alpha0 * &(&QRational::q_pow(k) + &QRational::q_pow(k + n)));
        }
        piv
    };
    for n in 1..steps {
        let e = lead + n;
        let residual = product_coeff(a1, &alpha, e) - a2.coeff(e);
        let piv = pivot(n);
        if piv.is_zero() {
            if residual.is_zero() {
                return Branch::Resonant(BranchMarker::Resonance { k, alpha0, order: n });
            }
            return Branch::Obstructed;
        }
        let next = -&(&residual * &piv.inv().expect("nonzero pivot"));
        if !next.is_zero() {
            alpha.insert(k + n, next);
        }
    }
    let series = LaurentSeries::from_terms(d, alpha, Some(k + steps));
    Branch::Solved(series)
}

/// Coefficient of `x^e` in `alpha(x) (a1(qx) - alpha(qx))` for the known
/// part of `alpha`.
fn product_coeff(a1: &LaurentSeries, alpha: &BTreeMap<i64, QRational>, e: i64) -> QRational {
    alpha
        .iter()
        .map(|(&i, ai)| {
            let j = e - i;
            let b = &a1.coeff(j) - alpha.get(&j).unwrap_or(&QRational::zero());
            (ai * &b).shift(j)
        })
        .sum()
}

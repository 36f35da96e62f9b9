//! Cyclic q-difference modules `D_q / D_q P`, their fixed vectors, and the
//! quotient realization of `L_(a,b)[lambda]`.

use std::collections::HashSet;

use num_integer::Integer;

use super::operator::QDiffOperator;
use super::series::LaurentSeries;
use crate::error::{Error, Result};
use crate::qalgebra::{step_operators, AlgebraElement};
use crate::qscalar::{QRational, Scalar, ScalarMode};
use crate::repn::SimpleDescriptor;

/// Coordinates `(z_0, ..., z_{n-1})` in the basis `v_i = y^i + D_q P`.
pub type CyclicVector = Vec<LaurentSeries>;

/// `D_q / D_q P` for `P = y^n + a_1 y^{n-1} + ... + a_n`.
#[derive(Clone, Debug)]
pub struct CyclicModule {
    p: QDiffOperator,
    /// `a[0] = 1`, `a[i] = a_i`.
    a: Vec<LaurentSeries>,
    /// `Phi^-1(v_0)`.
    v_minus1: CyclicVector,
}

/// Builds the companion module of a monic `P` with invertible constant term.
pub fn companion_module(p: &QDiffOperator, cap: i64) -> Result<CyclicModule> {
    let d = p.denom();
    let (lo, n) = p.y_range().ok_or_else(|| Error::domain("P must be nonzero"))?;
    if lo != 0 || n < 1 || p.terms().any(|(j, _)| !(0..=n).contains(&j)) || p.coeff(n) != Some(&LaurentSeries::one(d))
    {
        return Err(Error::domain(format!("expected a monic polynomial in y of positive degree, got {p}")));
    }
    let n = n as usize;
    let a: Vec<LaurentSeries> =
        (0..=n).map(|i| p.coeff((n - i) as i64).cloned().unwrap_or_else(|| LaurentSeries::zero(d))).collect();
    // v_{-1} = -sum_i a_{n-1-i}(qx) / a_n(qx) v_i
    let an_inv = a[n].scale_q(1).inv(cap).map_err(|_| Error::domain("a_n(x) must be invertible"))?;
    let v_minus1 = (0..n).map(|i| -&(&a[n - 1 - i].scale_q(1) * &an_inv)).collect();
    Ok(CyclicModule { p: p.clone(), a, v_minus1 })
}

impl CyclicModule {
    pub fn rank(&self) -> usize {
        self.a.len() - 1
    }

    pub fn denom(&self) -> u32 {
        self.p.denom()
    }

    pub fn operator(&self) -> &QDiffOperator {
        &self.p
    }

    /// `a_i(x)` for `0 <= i <= n`, with `a_0 = 1`.
    pub fn coefficient(&self, i: usize) -> &LaurentSeries {
        &self.a[i]
    }

    /// `A(x)` with `Psi_q(Z) = A(x) Z(q^-1 x)`: ones below the diagonal and
    /// `-a_n, ..., -a_1` down the last column.
    pub fn companion_matrix(&self) -> Vec<Vec<LaurentSeries>> {
        let n = self.rank();
        let d = self.denom();
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        if c == n - 1 {
                            -&self.a[n - r]
                        } else if r == c + 1 {
                            LaurentSeries::one(d)
                        } else {
                            LaurentSeries::zero(d)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn zero_vector(&self) -> CyclicVector {
        vec![LaurentSeries::zero(self.denom()); self.rank()]
    }

    /// `f(x) v_i` for `0 <= i < n`.
    pub fn basis_vector(&self, i: usize, f: LaurentSeries) -> CyclicVector {
        let mut z = self.zero_vector();
        z[i] = f;
        z
    }

    /// `Phi_q(sum z_i v_i) = sum z_i(q^-1 x) v_{i+1}`, reducing `v_n`.
    pub fn phi(&self, z: &[LaurentSeries]) -> CyclicVector {
        let n = self.rank();
        let top = z[n - 1].scale_q(-1);
        (0..n)
            .map(|i| {
                let carried = -&(&self.a[n - i] * &top);
                if i == 0 {
                    carried
                } else {
                    &z[i - 1].scale_q(-1) + &carried
                }
            })
            .collect()
    }

    /// `Phi_q^-1(sum z_i v_i) = sum z_i(q x) v_{i-1}`, reducing `v_{-1}`.
    pub fn phi_inv(&self, z: &[LaurentSeries]) -> CyclicVector {
        let n = self.rank();
        let bottom = z[0].scale_q(1);
        (0..n)
            .map(|i| {
                let carried = &self.v_minus1[i] * &bottom;
                if i + 1 == n {
                    carried
                } else {
                    &z[i + 1].scale_q(1) + &carried
                }
            })
            .collect()
    }

    pub fn phi_pow(&self, z: &[LaurentSeries], j: i64) -> CyclicVector {
        let mut out = z.to_vec();
        for _ in 0..j.unsigned_abs() {
            out = if j > 0 { self.phi(&out) } else { self.phi_inv(&out) };
        }
        out
    }

    /// `v_j = Phi^j(v_0)` for any integer `j`.
    pub fn upsilon(&self, j: i64) -> CyclicVector {
        self.phi_pow(&self.basis_vector(0, LaurentSeries::one(self.denom())), j)
    }

    /// Action of `sum_j c_j(x) y^j`.
    pub fn act(&self, op: &QDiffOperator, z: &[LaurentSeries]) -> CyclicVector {
        let mut out = self.zero_vector();
        for (j, c) in op.terms() {
            let moved = self.phi_pow(z, j);
            for (o, m) in out.iter_mut().zip(&moved) {
                *o = &*o + &(c * m);
            }
        }
        out
    }
}

/// Componentwise agreement below `bound`.
pub fn vectors_agree_below(u: &[LaurentSeries], v: &[LaurentSeries], bound: i64) -> bool {
    u.len() == v.len() && u.iter().zip(v).all(|(a, b)| (a - b).vanishes_below(bound))
}

fn vector_valuation(z: &[LaurentSeries]) -> Option<i64> {
    z.iter().filter_map(LaurentSeries::valuation).min()
}

/// A fixed vector `Psi_q(Z) = Z` with leading exponent `k` in its last
/// coordinate.
#[derive(Clone, Debug)]
pub struct FixedVector {
    pub k: i64,
    pub z: CyclicVector,
    /// Absolute order below which `Psi_q(Z) - Z` was checked to vanish.
    pub checked_to: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedMarker {
    /// The step at `x^{k+order}` has a vanishing pivot and right-hand side,
    /// so that coefficient is free; the branch is abandoned.
    Resonance { k: i64, order: i64 },
}

#[derive(Clone, Debug, Default)]
pub struct FixedVectorSearch {
    pub solutions: Vec<FixedVector>,
    pub markers: Vec<FixedMarker>,
}

/// Fixed vectors of `Phi_q` with last coordinate of valuation in `window`.
///
/// Writing `w = z_{n-1}`, the fixed-point equation expresses every `z_j` as
/// `Z_j w` for an operator `Z_j` and leaves one scalar equation `R w = 0`.
/// That equation is solved order by order: its lowest order is an indicial
/// polynomial in `q^-k`, every later order is linear. Each result is then
/// checked against `Phi_q` itself.
pub fn fixed_vectors(module: &CyclicModule, window: (i64, i64), t: i64) -> Result<FixedVectorSearch> {
    let n = module.rank();
    let d = module.denom();
    let y = QDiffOperator::y_pow(d, 1);
    let coeff_op = |i: usize| QDiffOperator::from_series(module.a[i].clone());
    let mut z_ops: Vec<QDiffOperator> = Vec::with_capacity(n);
    z_ops.push(-&(&coeff_op(n) * &y));
    for j in 1..n {
        let next = &(&y * &z_ops[j - 1]) - &(&coeff_op(n - j) * &y);
        z_ops.push(next);
    }
    let r = &z_ops[n - 1] - &QDiffOperator::one(d);
    let rs: Vec<(i64, &LaurentSeries)> = r.terms().filter(|(_, c)| !c.is_zero()).collect();
    let vmin = rs.iter().filter_map(|(_, c)| c.valuation()).min().expect("R has the -1 term");
    // valuations lost when forming z_j from w
    let loss: i64 = z_ops
        .iter()
        .flat_map(|op| op.terms().filter_map(|(_, c)| c.valuation()))
        .map(|v| (-v).max(0))
        .max()
        .unwrap_or(0);
    let known_to = rs.iter().filter_map(|(_, c)| c.prec()).map(|p| p - vmin).min();
    let steps = known_to.map_or(t + loss, |kt| kt.min(t + loss));
    let pivot = |m: i64| -> QRational {
        rs.iter().map(|(i, c)| c.coeff(vmin).shift(-i * m)).sum()
    };
    let mut out = FixedVectorSearch::default();
    'branch: for k in window.0..=window.1 {
        if !pivot(k).is_zero() {
            continue;
        }
        let mut w: Vec<QRational> = vec![QRational::one()];
        for s in 1..steps {
            let e = k + vmin + s;
            let residual: QRational = rs
                .iter()
                .flat_map(|(i, c)| {
                    w.iter().enumerate().map(move |(m, wm)| {
                        let m = k + m as i64;
                        (&c.coeff(e - m) * wm).shift(-i * m)
                    })
                })
                .sum();
            let piv = pivot(k + s);
            if piv.is_zero() {
                if residual.is_zero() {
                    out.markers.push(FixedMarker::Resonance { k, order: s });
                }
                continue 'branch;
            }
            w.push(-&(&residual * &piv.inv()?));
        }
        let w = LaurentSeries::from_terms(d, w.into_iter().enumerate().map(|(m, c)| (k + m as i64, c)), Some(k + steps));
        let z: CyclicVector = z_ops.iter().map(|op| op.apply(&w)).collect();
        let residual: Vec<LaurentSeries> = module.phi(&z).iter().zip(&z).map(|(a, b)| a - b).collect();
        let val = vector_valuation(&z).unwrap_or(k);
        let checked_to = residual.iter().filter_map(LaurentSeries::prec).fold(val + t, i64::min);
        if !residual.iter().all(|c| c.vanishes_below(checked_to)) {
            return Err(Error::Internal(format!("fixed vector with k={k} fails Psi_q(Z) = Z")));
        }
        out.solutions.push(FixedVector { k, z, checked_to });
    }
    Ok(out)
}

/// One basis vector `x^i v_beta` of `D_q / D_q Q` and its `K`-eigenvalue
/// `lambda q^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub i: i64,
    pub beta: i64,
    pub exponent: i64,
}

/// `D_q / D_q (y^b - lambda x^-a)` with its `K = x^a y^b` spectrum.
#[derive(Clone, Debug)]
pub struct DqQuotient {
    pub a: i64,
    pub b: i64,
    pub lambda: QRational,
    pub module: CyclicModule,
    /// Every entry verified by acting with `K` on the module.
    pub spectrum: Vec<SpectrumEntry>,
    pub exponents_distinct: bool,
    /// `y^b v_0 = lambda x^-a v_0`.
    pub v_b_holds: bool,
    /// `y^-1 v_0 = q^a lambda^-1 x^a v_{b-1}`.
    pub v_minus1_holds: bool,
    /// Exponent shifts produced by the step operators `(X, Y)` on the window.
    pub step_shifts: (i64, i64),
    /// The class of `L_(a,b)[lambda]` when `lambda` is a monomial.
    pub descriptor: Option<SimpleDescriptor>,
}

fn element_to_operator(e: &AlgebraElement) -> Result<QDiffOperator> {
    let terms = e
        .terms()
        .map(|(alpha, c)| {
            let c = c.as_generic().ok_or_else(|| Error::domain("step operators must be taken in generic mode"))?;
            Ok((alpha[1], LaurentSeries::monomial(1, alpha[0], c.clone())))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QDiffOperator::from_terms(1, terms))
}

/// Reads `c x^i v_beta` off a vector with a single nonzero coordinate term.
fn monomial_position(z: &[LaurentSeries]) -> Option<(i64, usize)> {
    let mut hits = z.iter().enumerate().filter(|(_, c)| !c.is_zero());
    let (beta, c) = hits.next()?;
    if hits.next().is_some() || c.terms().count() != 1 || !c.is_exact() {
        return None;
    }
    Some((c.valuation()?, beta))
}

/// Realizes `L_(a,b)[lambda]` as the quotient by `Q = y^b - lambda x^-a` and
/// checks the eigenvalue formula for `K` on `x^i v_beta`, `|i| <= w`, the two
/// boundary relations of the basis, and the unit shifts of the step operators.
pub fn dq_quotient_module(a: i64, b: i64, lambda: &QRational, w: i64, cap: i64) -> Result<DqQuotient> {
    if a < 1 || b < 1 || a.gcd(&b) != 1 {
        return Err(Error::NotCoprime(a, b));
    }
    if lambda.is_zero() {
        return Err(Error::domain("lambda must be nonzero"));
    }
    let x_pow = |e: i64, c: QRational| LaurentSeries::monomial(1, e, c);
    let q = QDiffOperator::from_terms(1, [(b, LaurentSeries::one(1)), (0, -&x_pow(-a, lambda.clone()))]);
    let module = companion_module(&q, cap)?;
    let k_op = QDiffOperator::term(b, x_pow(a, QRational::one()));
    let eigen_exponent = |z: &CyclicVector, i: i64, beta: usize| -> Result<i64> {
        let e = -i * b + beta as i64 * a;
        let expected: CyclicVector = z.iter().map(|c| c.scale(&lambda.shift(e))).collect();
        if module.act(&k_op, z) != expected {
            return Err(Error::Internal(format!("K on x^{i} v_{beta} is not lambda q^{e}")));
        }
        Ok(e)
    };

    let mut spectrum = Vec::new();
    for i in -w..=w {
        for beta in 0..b as usize {
            let z = module.basis_vector(beta, x_pow(i, QRational::one()));
            let exponent = eigen_exponent(&z, i, beta)?;
            spectrum.push(SpectrumEntry { i, beta: beta as i64, exponent });
        }
    }
    let exponents_distinct = spectrum.iter().map(|s| s.exponent).collect::<HashSet<_>>().len() == spectrum.len();

    let v0 = module.basis_vector(0, LaurentSeries::one(1));
    let v_b_holds = module.upsilon(b) == module.basis_vector(0, x_pow(-a, lambda.clone()));
    let v_minus1_holds =
        module.upsilon(-1) == module.basis_vector(b as usize - 1, x_pow(a, lambda.inv()?.shift(a)));
    debug_assert_eq!(module.phi_inv(&module.phi(&v0)), v0);

    let steps = step_operators(a, b, ScalarMode::Generic)?;
    let mut shifts = Vec::with_capacity(2);
    for hat in [&steps.xhat, &steps.yhat] {
        let op = element_to_operator(hat)?;
        let mut seen: HashSet<i64> = HashSet::new();
        for s in &spectrum {
            let z = module.act(&op, &module.basis_vector(s.beta as usize, x_pow(s.i, QRational::one())));
            let (i2, beta2) = monomial_position(&z)
                .ok_or_else(|| Error::Internal("step operator did not map a weight vector to a weight vector".into()))?;
            seen.insert(eigen_exponent(&z, i2, beta2)? - s.exponent);
        }
        match seen.into_iter().collect::<Vec<_>>()[..] {
            [shift] => shifts.push(shift),
            _ => return Err(Error::Internal("step operator shifts are not uniform".into())),
        }
    }
    let descriptor = SimpleDescriptor::from_scalar(a, b, &Scalar::Generic(lambda.clone()))?;
    Ok(DqQuotient {
        a,
        b,
        lambda: lambda.clone(),
        module,
        spectrum,
        exponents_distinct,
        v_b_holds,
        v_minus1_holds,
        step_shifts: (shifts[0], shifts[1]),
        descriptor,
    })
}

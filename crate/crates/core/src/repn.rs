//! Modules over the quantum torus `L_q(2)` and the quantum plane `A_q(2)`:
//! the basic module `C[t, t^-1]`, its twists by automorphisms, and the simple
//! modules `L_(a,b)[lambda]` realized inside them.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::automorphism::Automorphism;
use crate::error::{Error, Result};
use crate::intlinalg::{coprime_ladder, IntMatrix};
use crate::qalgebra::{AlgebraElement, AlgebraKind, Presentation};
use crate::qscalar::{MonomialScalar, QRational, Scalar, ScalarMode};

/// A finite combination `sum_m c_m t^m`.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleVector {
    mode: ScalarMode,
    support: BTreeMap<i64, Scalar>,
}

impl ModuleVector {
    pub fn zero(mode: ScalarMode) -> Self {
        ModuleVector { mode, support: BTreeMap::new() }
    }

    /// `t^m`.
    pub fn basis(mode: ScalarMode, m: i64) -> Self {
        Self::term(m, Scalar::one(mode))
    }

    /// `c t^m`.
    pub fn term(m: i64, c: Scalar) -> Self {
        let mut v = Self::zero(c.mode());
        v.add_term(m, c);
        v
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Scalar)>>(mode: ScalarMode, terms: I) -> Result<Self> {
        let mut v = Self::zero(mode);
        for (m, c) in terms {
            v.add_term(m, c.to_mode(mode)?);
        }
        Ok(v)
    }

    fn add_term(&mut self, m: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let sum = match self.support.get(&m) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.support.remove(&m);
        } else {
            self.support.insert(m, sum);
        }
    }

    pub fn mode(&self) -> ScalarMode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn coeff(&self, m: i64) -> Scalar {
        self.support.get(&m).cloned().unwrap_or_else(|| Scalar::zero(self.mode))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.support.iter().map(|(m, c)| (*m, c))
    }

    /// `Some((m, c))` when the vector is `c t^m`.
    pub fn single_term(&self) -> Option<(i64, &Scalar)> {
        (self.support.len() == 1).then(|| self.terms().next().expect("one term"))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.mode);
        for (m, x) in self.terms() {
            out.add_term(m, x * c);
        }
        out
    }

    /// Applies `t^m -> f(m) t^{m + shift}` termwise.
    fn map_terms(&self, shift: i64, f: impl Fn(i64) -> Scalar) -> Self {
        let mut out = Self::zero(self.mode);
        for (m, c) in self.terms() {
            out.add_term(m + shift, c * &f(m));
        }
        out
    }
}

impl fmt::Display for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms().map(|(m, c)| format!("({c})*t^{m}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleVector({self})")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    X,
    Y,
    XInv,
    YInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::X => Letter::XInv,
            Letter::Y => Letter::YInv,
            Letter::XInv => Letter::X,
            Letter::YInv => Letter::Y,
        }
    }
}

/// Parses words such as `x y^-1 x^2` into letters, leftmost first.
pub fn parse_word(text: &str) -> Result<Vec<Letter>> {
    let bad = |msg: String| Error::Parse { pos: 0, msg };
    let mut out = Vec::new();
    for token in text.split(|c: char| c.is_whitespace() || c == '*').filter(|s| !s.is_empty()) {
        let (name, exp) = match token.split_once('^') {
            Some((n, e)) => (n, e.trim_matches(|c| c == '(' || c == ')').parse::<i64>().map_err(|_| bad(format!("bad exponent in {token}")))?),
            None => (token, 1),
        };
        let (pos, neg) = match name {
            "x" => (Letter::X, Letter::XInv),
            "y" => (Letter::Y, Letter::YInv),
            _ => return Err(bad(format!("unknown letter {name}"))),
        };
        let letter = if exp < 0 { neg } else { pos };
        out.extend(std::iter::repeat_n(letter, exp.unsigned_abs() as usize));
    }
    Ok(out)
}

/// An action of the four letters on `C[t, t^-1]`.
pub trait ModuleAction {
    fn mode(&self) -> ScalarMode;

    fn act(&self, letter: Letter, v: &ModuleVector) -> ModuleVector;

    /// The word acts right to left: `(w_1 ... w_k) v = w_1 (... (w_k v))`.
    fn act_word(&self, word: &[Letter], v: &ModuleVector) -> ModuleVector {
        word.iter().rev().fold(v.clone(), |acc, &l| self.act(l, &acc))
    }

    /// `x^alpha_1 y^alpha_2` acts as `x^alpha_1 (y^alpha_2 v)`.
    fn act_monomial(&self, alpha: [i64; 2], v: &ModuleVector) -> ModuleVector {
        let mut out = v.clone();
        for (e, pos) in [(alpha[1], Letter::Y), (alpha[0], Letter::X)] {
            let l = if e < 0 { pos.inverse() } else { pos };
            for _ in 0..e.unsigned_abs() {
                out = self.act(l, &out);
            }
        }
        out
    }

    fn act_element(&self, f: &AlgebraElement, v: &ModuleVector) -> Result<ModuleVector> {
        if f.presentation().n() != 2 || f.presentation().h_entry(0, 1) != 1 {
            return Err(Error::domain("only the quantum plane and torus act"));
        }
        let mut out = ModuleVector::zero(self.mode());
        for (alpha, c) in f.terms() {
            out = out.add(&self.act_monomial([alpha[0], alpha[1]], v).scale(&c.to_mode(self.mode())?));
        }
        Ok(out)
    }
}

/// `x f(t) = f(qt)`, `y f(t) = t f(t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasicModule {
    pub mode: ScalarMode,
}

impl ModuleAction for BasicModule {
    fn mode(&self) -> ScalarMode {
        self.mode
    }

    fn act(&self, letter: Letter, v: &ModuleVector) -> ModuleVector {
        let mode = self.mode;
        match letter {
            Letter::X => v.map_terms(0, |m| Scalar::q_pow(mode, m)),
            Letter::XInv => v.map_terms(0, |m| Scalar::q_pow(mode, -m)),
            Letter::Y => v.map_terms(1, |_| Scalar::one(mode)),
            Letter::YInv => v.map_terms(-1, |_| Scalar::one(mode)),
        }
    }
}

/// One letter of a twisted action: `t^m -> kappa q^{e (m + shift)} t^{m + shift}`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct LetterRule {
    kappa: Scalar,
    kappa_inv: Scalar,
    e: i64,
    shift: i64,
}

impl LetterRule {
    fn forward(&self, v: &ModuleVector) -> ModuleVector {
        let (e, s) = (self.e, self.shift);
        v.map_terms(s, |m| self.kappa.shift(e * (m + s)))
    }

    /// Inverse map: `t^m -> kappa^-1 q^{-e m} t^{m - shift}`.
    fn backward(&self, v: &ModuleVector) -> ModuleVector {
        let e = self.e;
        v.map_terms(-self.shift, |m| self.kappa_inv.shift(-e * m))
    }
}

/// The basic module twisted by `tau = tau_c tau_A`, `det A = 1`:
/// `x * t^m = c1^a11 c2^a21 q^{a11(m + a21)} t^{m + a21}` and
/// `y * t^m = c1^a12 c2^a22 q^{a12(m + a22)} t^{m + a22}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedBasicModule {
    a: [[i64; 2]; 2],
    c: [Scalar; 2],
    x_rule: LetterRule,
    y_rule: LetterRule,
}

impl TwistedBasicModule {
    pub fn new(a: [[i64; 2]; 2], c: [Scalar; 2]) -> Result<Self> {
        if a[0][0] * a[1][1] - a[0][1] * a[1][0] != 1 {
            return Err(Error::domain(format!("twisting matrix {a:?} must have determinant 1")));
        }
        if c[0].mode() != c[1].mode() {
            return Err(Error::ModeMismatch(c[0].mode().to_string(), c[1].mode().to_string()));
        }
        if c.iter().any(Scalar::is_zero) {
            return Err(Error::domain("twisting scalars must be nonzero"));
        }
        let rule = |col: usize| -> Result<LetterRule> {
            let kappa = c[0].pow(a[0][col])?.try_mul(&c[1].pow(a[1][col])?)?;
            Ok(LetterRule { kappa_inv: kappa.inv()?, kappa, e: a[0][col], shift: a[1][col] })
        };
        let (x_rule, y_rule) = (rule(0)?, rule(1)?);
        Ok(TwistedBasicModule { a, c, x_rule, y_rule })
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.a
    }

    pub fn scalars(&self) -> &[Scalar; 2] {
        &self.c
    }

    /// The same twist as an automorphism of `L_q(2)`: `x -> c^{col_1(A)} x^a11 y^a21`,
    /// `y -> c^{col_2(A)} x^a12 y^a22`.
    pub fn automorphism(&self) -> Result<Automorphism> {
        let torus = Presentation::quantum_plane(AlgebraKind::Laurent, self.mode());
        let m = IntMatrix::from_i64(&[&self.a[0], &self.a[1]]);
        Automorphism::new(&torus, vec![self.x_rule.kappa.clone(), self.y_rule.kappa.clone()], m)
    }

    /// `K * t^m` for `K = x^a y^b` with `(a, b) = (|a22|, |a21|)`.
    pub fn k_action(&self, m: i64) -> ModuleVector {
        let (a, b) = (self.a[1][1].abs(), self.a[1][0].abs());
        self.act_monomial([a, b], &ModuleVector::basis(self.mode(), m))
    }
}

impl ModuleAction for TwistedBasicModule {
    fn mode(&self) -> ScalarMode {
        self.c[0].mode()
    }

    fn act(&self, letter: Letter, v: &ModuleVector) -> ModuleVector {
        match letter {
            Letter::X => self.x_rule.forward(v),
            Letter::Y => self.y_rule.forward(v),
            Letter::XInv => self.x_rule.backward(v),
            Letter::YInv => self.y_rule.backward(v),
        }
    }
}

/// The first `m` in `[-window, window]` where a relation fails, with its name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationViolation {
    pub m: i64,
    pub relation: &'static str,
}

/// Checks `x(y t^m) = q y(x t^m)` and the inverse-letter identities on `|m| <= window`.
pub fn module_relation_check(action: &impl ModuleAction, window: i64) -> std::result::Result<(), RelationViolation> {
    let mode = action.mode();
    let q = Scalar::q_pow(mode, 1);
    for m in -window..=window {
        let t = ModuleVector::basis(mode, m);
        let xy = action.act(Letter::X, &action.act(Letter::Y, &t));
        let yx = action.act(Letter::Y, &action.act(Letter::X, &t));
        if xy != yx.scale(&q) {
            return Err(RelationViolation { m, relation: "xy = qyx" });
        }
        for (l, name) in [(Letter::X, "x x^-1 = 1"), (Letter::Y, "y y^-1 = 1")] {
            let there = action.act(l, &action.act(l.inverse(), &t));
            let back = action.act(l.inverse(), &action.act(l, &t));
            if there != t || back != t {
                return Err(RelationViolation { m, relation: name });
            }
        }
    }
    Ok(())
}

/// The isomorphism class of `L_(a,b)[lambda]` for a monomial `lambda = c q^e`;
/// the class forgets `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimpleDescriptor {
    pub a: i64,
    pub b: i64,
    /// Class representative `c q^0`.
    pub lambda: MonomialScalar,
}

impl SimpleDescriptor {
    pub fn new(a: i64, b: i64, lambda: MonomialScalar) -> Result<Self> {
        if a < 1 || b < 1 || a.gcd(&b) != 1 {
            return Err(Error::NotCoprime(a, b));
        }
        if lambda.coeff.is_zero() {
            return Err(Error::domain("lambda must be nonzero"));
        }
        Ok(SimpleDescriptor { a, b, lambda: MonomialScalar { coeff: lambda.coeff, exp: 0 } })
    }

    /// Reads the class of a generic scalar; `None` unless it is a monomial.
    pub fn from_scalar(a: i64, b: i64, lambda: &Scalar) -> Result<Option<Self>> {
        match lambda.as_generic().and_then(QRational::as_monomial) {
            Some(mono) => Self::new(a, b, mono).map(Some),
            None => Ok(None),
        }
    }
}

impl fmt::Display for SimpleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L_({},{})[{}]", self.a, self.b, self.lambda)
    }
}

/// Isomorphic iff `(a, b)` agree and `lambda / lambda'` is a power of `q`.
pub fn iso_test(d1: &SimpleDescriptor, d2: &SimpleDescriptor) -> bool {
    d1 == d2
}

/// `L_(a,b)[lambda]` twisted by `tau_c` is `L_(a,b)[lambda c1^a c2^b]`.
pub fn twist_descriptor(d: &SimpleDescriptor, c: [&MonomialScalar; 2]) -> Result<SimpleDescriptor> {
    let coeff = &d.lambda.coeff * c[0].coeff.pow(d.a as i32) * c[1].coeff.pow(d.b as i32);
    SimpleDescriptor::new(d.a, d.b, MonomialScalar { coeff, exp: 0 })
}

/// The block label `(m, n) / gcd(m, n)`.
pub fn block_invariant(m: i64, n: i64) -> Result<(i64, i64)> {
    if m < 0 || n < 0 {
        return Err(Error::domain("block labels are non-negative"));
    }
    if m == 0 && n == 0 {
        return Err(Error::domain("(0, 0) labels no block"));
    }
    let g = m.gcd(&n);
    Ok((m / g, n / g))
}

#[derive(Clone, Debug)]
pub struct RestrictionReport {
    pub simple: bool,
    /// `(a, b) = (|a22|, |a21|)` and the class of `K * 1` when that scalar is a monomial.
    pub descriptor: Option<SimpleDescriptor>,
    /// `K * 1` where `K = x^a y^b`, when the restriction is simple.
    pub k_on_one: Option<Scalar>,
}

/// `(b(b+1)/2) a12 a22 + a11 (a b a22 + (a(a+1)/2) a21)`, the `q`-exponent of
/// `K * 1` for a simple restriction.
pub fn k_eigen_exponent(a_mat: [[i64; 2]; 2]) -> i64 {
    let [[a11, a12], [a21, a22]] = a_mat;
    let (a, b) = (a22.abs(), a21.abs());
    b * (b + 1) / 2 * a12 * a22 + a11 * (a * b * a22 + a * (a + 1) / 2 * a21)
}

/// Restriction of the twisted module to `A_q(2)`: simple iff `a21 a22 < 0`.
/// The closed-form eigenvalue of `K` on `1` is cross-checked against the
/// composed action.
pub fn restriction_analysis(module: &TwistedBasicModule) -> Result<RestrictionReport> {
    let [_, [a21, a22]] = module.matrix();
    if a21 * a22 >= 0 {
        return Ok(RestrictionReport { simple: false, descriptor: None, k_on_one: None });
    }
    let (a, b) = (a22.abs(), a21.abs());
    let eps = a22.signum();
    let closed = module.scalars()[0].pow(eps)?.shift(k_eigen_exponent(module.matrix()));
    let composed = module.k_action(0);
    match composed.single_term() {
        Some((0, c)) if *c == closed => {}
        _ => {
            return Err(Error::Internal(format!("K * 1 = {composed} but the closed form gives {closed}")));
        }
    }
    let descriptor = SimpleDescriptor::from_scalar(a, b, &closed)?;
    Ok(RestrictionReport { simple: true, descriptor, k_on_one: Some(closed) })
}

/// Realizes `L_(a,b)[lambda]` as the basic module twisted by
/// `A = [[u, -v], [-b, a]]` and `c = (lambda q^{-e}, 1)`, with `(u, v)` from
/// the coprime ladder and `e` the exponent of `K * 1`.
pub fn construct_simple(a: i64, b: i64, lambda: &Scalar) -> Result<TwistedBasicModule> {
    let (u, v) = coprime_ladder(a, b)?;
    if lambda.is_zero() {
        return Err(Error::domain("lambda must be nonzero"));
    }
    let mat = [[u, -v], [-b, a]];
    let c1 = lambda.shift(-k_eigen_exponent(mat));
    let module = TwistedBasicModule::new(mat, [c1, Scalar::one(lambda.mode())])?;
    let report = restriction_analysis(&module)?;
    if report.k_on_one.as_ref() != Some(lambda) {
        return Err(Error::Internal(format!("constructed module has K * 1 = {:?}, wanted {lambda}", report.k_on_one)));
    }
    Ok(module)
}

/// The one-dimensional module `x -> mu1`, `y -> mu2` with `mu1 mu2 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneDimModule {
    pub mu1: Scalar,
    pub mu2: Scalar,
}

impl OneDimModule {
    pub fn new(mu1: Scalar, mu2: Scalar) -> Result<Self> {
        if !mu1.try_mul(&mu2)?.is_zero() {
            return Err(Error::domain(format!("mu1 mu2 = ({mu1})({mu2}) must vanish")));
        }
        Ok(OneDimModule { mu1, mu2 })
    }

    /// The scalar by which `x^a y^b` acts.
    pub fn monomial_action(&self, a: u32, b: u32) -> Scalar {
        let x = self.mu1.pow(a as i64).expect("non-negative power");
        &x * &self.mu2.pow(b as i64).expect("non-negative power")
    }

    /// `K = x^a y^b` acts invertibly, for some coprime `a, b >= 1`; never the case here.
    pub fn admissible(&self) -> bool {
        !self.monomial_action(1, 1).is_zero()
    }
}

/// The `q`-power `k` with `s = lambda q^k`, for generic monomial ratios.
pub fn q_power_ratio(s: &Scalar, lambda: &Scalar) -> Option<i64> {
    let ratio = s.try_div(lambda).ok()?;
    let mono = ratio.as_generic()?.as_monomial()?;
    mono.coeff.is_one().then_some(mono.exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::step_operators;

    const G: ScalarMode = ScalarMode::Generic;

    fn sc(s: &str) -> Scalar {
        Scalar::parse(G, s).unwrap()
    }

    fn mono(s: &str) -> MonomialScalar {
        QRational::parse(s).unwrap().as_monomial().unwrap()
    }

    #[test]
    fn basic_action() {
        let basic = BasicModule { mode: G };
        let t = |m| ModuleVector::basis(G, m);
        assert_eq!(basic.act(Letter::X, &t(0)), t(0));
        assert_eq!(basic.act(Letter::X, &t(3)), ModuleVector::term(3, sc("q^3")));
        assert_eq!(basic.act(Letter::YInv, &t(0)), t(-1));
        assert!(module_relation_check(&basic, 20).is_ok());
    }

    #[test]
    fn twisted_action_examples() {
        let id = TwistedBasicModule::new([[1, 0], [0, 1]], [sc("1"), sc("1")]).unwrap();
        let basic = BasicModule { mode: G };
        for m in -3..=3 {
            for l in [Letter::X, Letter::Y, Letter::XInv, Letter::YInv] {
                let t = ModuleVector::basis(G, m);
                assert_eq!(id.act(l, &t), basic.act(l, &t));
            }
        }
        let lam = sc("5/3");
        let tw = TwistedBasicModule::new([[1, 0], [-1, 1]], [lam.clone(), sc("1")]).unwrap();
        for m in -4..=4 {
            let t = ModuleVector::basis(G, m);
            assert_eq!(tw.act(Letter::X, &t), ModuleVector::term(m - 1, lam.shift(m - 1)));
            assert_eq!(tw.act(Letter::Y, &t), ModuleVector::basis(G, m + 1));
        }
        let xy = parse_word("x y").unwrap();
        assert_eq!(tw.act_word(&xy, &ModuleVector::basis(G, 0)), ModuleVector::term(0, lam));
        assert!(module_relation_check(&tw, 20).is_ok());
    }

    #[test]
    fn twisted_action_matches_automorphism() {
        let tw = TwistedBasicModule::new([[2, 3], [-1, -1]], [sc("2q"), sc("1/(q+1)")]).unwrap();
        let sigma = tw.automorphism().unwrap();
        assert!(sigma.verify(G).unwrap().is_automorphism);
        let basic = BasicModule { mode: G };
        let images = sigma.generator_images().unwrap();
        for m in -3..=3 {
            let t = ModuleVector::basis(G, m);
            for (l, img) in [Letter::X, Letter::Y].into_iter().zip(&images) {
                assert_eq!(tw.act(l, &t), basic.act_element(img, &t).unwrap());
            }
        }
    }

    #[test]
    fn restriction_examples() {
        let lam = sc("7");
        let simple = TwistedBasicModule::new([[1, 0], [-1, 1]], [lam.clone(), sc("1")]).unwrap();
        let r = restriction_analysis(&simple).unwrap();
        assert!(r.simple);
        assert_eq!(r.k_on_one, Some(lam));
        let d = r.descriptor.unwrap();
        assert_eq!((d.a, d.b), (1, 1));

        for a in [[[1, 1], [0, 1]], [[1, 0], [1, 1]]] {
            let m = TwistedBasicModule::new(a, [sc("1"), sc("1")]).unwrap();
            assert!(!restriction_analysis(&m).unwrap().simple);
        }
        let eps = TwistedBasicModule::new([[0, -1], [1, -1]], [sc("3"), sc("q+1")]).unwrap();
        let r = restriction_analysis(&eps).unwrap();
        assert!(r.simple);
        assert_eq!(r.descriptor.unwrap().lambda, mono("1/3"));
    }

    #[test]
    fn construct_examples() {
        let m = construct_simple(1, 1, &sc("4")).unwrap();
        assert_eq!(m.matrix(), [[1, 0], [-1, 1]]);
        assert_eq!(m.scalars(), &[sc("4"), sc("1")]);
        let m = construct_simple(1, 2, &sc("q")).unwrap();
        assert_eq!(m.matrix(), [[1, 0], [-2, 1]]);
        let m = construct_simple(3, 2, &sc("1")).unwrap();
        assert_eq!(m.matrix(), [[1, -1], [-2, 3]]);
        assert!(construct_simple(2, 2, &sc("1")).is_err());
        assert!(construct_simple(1, 1, &sc("0")).is_err());
    }

    #[test]
    fn spectral_ladder() {
        let lam = sc("3q");
        let module = construct_simple(2, 3, &lam).unwrap();
        let steps = step_operators(2, 3, G).unwrap();
        let to_pair = |e: &AlgebraElement| {
            let (alpha, _) = e.single_term().unwrap();
            [alpha[0], alpha[1]]
        };
        let mut seen = Vec::new();
        for m in -20..=20 {
            let kv = module.k_action(m);
            let (shift, s) = kv.single_term().unwrap();
            assert_eq!(shift, m);
            let k = q_power_ratio(s, &lam).unwrap();
            seen.push(k);
            let t = ModuleVector::basis(G, m);
            let up = module.act_monomial(to_pair(&steps.yhat), &t);
            let down = module.act_monomial(to_pair(&steps.xhat), &t);
            let (mu, _) = up.single_term().unwrap();
            let (md, _) = down.single_term().unwrap();
            let k_of = |mm: i64| q_power_ratio(module.k_action(mm).single_term().unwrap().1, &lam).unwrap();
            assert_eq!(k_of(mu), k + 1);
            assert_eq!(k_of(md), k - 1);
        }
        assert!(seen.windows(2).all(|w| w[1] == w[0] + 1));
    }

    #[test]
    fn classification() {
        let d = |a, b, s: &str| SimpleDescriptor::new(a, b, mono(s)).unwrap();
        assert!(iso_test(&d(1, 2, "q^3"), &d(1, 2, "q^-1")));
        assert!(!iso_test(&d(1, 2, "1"), &d(2, 1, "1")));
        assert!(!iso_test(&d(1, 2, "2"), &d(1, 2, "3")));
        let base = d(1, 1, "1");
        assert_eq!(twist_descriptor(&base, [&mono("1"), &mono("1")]).unwrap(), base);
        assert_eq!(twist_descriptor(&base, [&mono("2"), &mono("3")]).unwrap(), d(1, 1, "6"));
        let d23 = d(2, 3, "1");
        assert!(iso_test(&twist_descriptor(&d23, [&mono("q"), &mono("1")]).unwrap(), &d23));
    }

    #[test]
    fn blocks_and_one_dimensional() {
        assert_eq!(block_invariant(4, 6).unwrap(), (2, 3));
        assert_eq!(block_invariant(5, 0).unwrap(), (1, 0));
        assert_eq!(block_invariant(0, 3).unwrap(), (0, 1));
        assert_eq!(block_invariant(7, 7).unwrap(), (1, 1));
        assert!(block_invariant(0, 0).is_err());

        assert!(OneDimModule::new(sc("0"), sc("0")).is_ok());
        let m = OneDimModule::new(sc("5"), sc("0")).unwrap();
        assert!(m.monomial_action(1, 1).is_zero());
        assert!(!m.admissible());
        assert!(OneDimModule::new(sc("2"), sc("3")).is_err());
    }

    /// Drops `q^{a11 a21}` from the `x` formula only; with `drop_m` the
    /// `m`-dependent factor goes instead, from `x` and `x^-1` alike.
    struct Corrupted {
        inner: TwistedBasicModule,
        drop_m: bool,
    }

    impl ModuleAction for Corrupted {
        fn mode(&self) -> ScalarMode {
            G
        }
        fn act(&self, letter: Letter, v: &ModuleVector) -> ModuleVector {
            let [[a11, _], [a21, _]] = self.inner.matrix();
            let out = self.inner.act(letter, v);
            match (letter, self.drop_m) {
                (Letter::X, false) => out.scale(&Scalar::q_pow(G, -a11 * a21)),
                (Letter::X, true) => {
                    ModuleVector::from_terms(G, out.terms().map(|(m, c)| (m, c.shift(-a11 * (m - a21))))).unwrap()
                }
                (Letter::XInv, true) => {
                    ModuleVector::from_terms(G, out.terms().map(|(m, c)| (m, c.shift(a11 * (m + a21))))).unwrap()
                }
                _ => out,
            }
        }
    }

    #[test]
    fn corrupted_action_is_caught() {
        let good = TwistedBasicModule::new([[2, 1], [-3, -1]], [sc("3"), sc("1")]).unwrap();
        assert!(module_relation_check(&good, 20).is_ok());
        let bad = Corrupted { inner: good.clone(), drop_m: false };
        assert_eq!(module_relation_check(&bad, 20).unwrap_err().relation, "x x^-1 = 1");
        let bad = Corrupted { inner: good, drop_m: true };
        assert_eq!(module_relation_check(&bad, 20).unwrap_err(), RelationViolation { m: -20, relation: "xy = qyx" });
    }
}

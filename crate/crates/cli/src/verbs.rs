use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Value};

use qlpa::automorphism::{canonical_factors, Automorphism};
use qlpa::intlinalg::{anti_aut_check, canonical_form, kernel_basis, pfaffian, IntMatrix};
use qlpa::qalgebra::{factorization_data, step_operators, AlgebraElement, Presentation};
use qlpa::qdiff::{
    dq_quotient_module, factor_degree2, first_order_operator, solve_first_order, solve_ramified, verify_annihilation,
    FirstOrderSolution,
};
use qlpa::qscalar::{QRational, Scalar, ScalarMode};
use qlpa::repn::{
    construct_simple, iso_test, module_relation_check, parse_word, restriction_analysis, BasicModule, ModuleAction,
    ModuleVector, SimpleDescriptor, TwistedBasicModule,
};

use crate::input::{self, at, decode, Kind, Matrix, Text};
use crate::{CliError, Options};

type Outcome = Result<Value, CliError>;

pub(crate) fn run(verb: &str, p: &Value, opts: &Options) -> Outcome {
    match verb {
        "canon" => canon(p),
        "pfaffian" => pfaffian_verb(p),
        "kernel" => kernel(p),
        "aut-check" => aut_check(p, opts),
        "aut-compose" => aut_compose(p, opts),
        "aut-apply" => aut_apply(p, opts),
        "alg-mul" => alg_mul(p, opts),
        "unit-inv" => unit_inv(p, opts),
        "structure" => structure(p),
        "step-ops" => step_ops(p, opts),
        "module-construct" => module_construct(p, opts),
        "module-act" => module_act(p, opts),
        "iso-test" => iso(p),
        "qde-solve" => qde_solve(p, opts),
        "qde-verify" => qde_verify(p, opts),
        "factor2" => factor2(p, opts),
        "dq-module" => dq_module(p, opts),
        "paper-examples" => {
            decode::<Empty>(p)?;
            crate::paper::run()
        }
        other => Err(CliError::UnknownVerb(other.to_string())),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Empty {}

pub(crate) fn num(b: &BigInt) -> Value {
    serde_json::from_str(&b.to_string()).expect("integers are valid JSON")
}

pub(crate) fn rows(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(num).collect())).collect())
}

/// Both forms of an element; either one parses back.
pub(crate) fn element_json(e: &AlgebraElement) -> Value {
    let mut v = e.to_json();
    v["text"] = Value::String(e.to_string());
    v
}

fn vector_json(v: &ModuleVector) -> Value {
    let map: serde_json::Map<String, Value> = v.terms().map(|(m, c)| (m.to_string(), Value::String(c.to_string()))).collect();
    Value::Object(map)
}

// intlinalg ----------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SkewParams {
    #[serde(rename = "H")]
    h: Matrix,
}

fn canon(p: &Value) -> Outcome {
    let params: SkewParams = decode(p)?;
    let h = input::skew_matrix("/H", &params.h)?;
    let cd = canonical_form(&h);
    Ok(json!({
        "W": rows(&cd.w),
        "m": cd.m.iter().map(num).collect::<Vec<_>>(),
        "rank": cd.rank,
        "det_sign": cd.det_sign,
        "canonical": rows(cd.canonical_matrix().matrix()),
    }))
}

fn pfaffian_verb(p: &Value) -> Outcome {
    let params: SkewParams = decode(p)?;
    let h = input::skew_matrix("/H", &params.h)?;
    Ok(json!({ "pfaffian": num(&pfaffian(&h)?) }))
}

fn kernel(p: &Value) -> Outcome {
    let params: SkewParams = decode(p)?;
    let h = input::skew_matrix("/H", &params.h)?;
    let basis: Vec<Value> = kernel_basis(&h).iter().map(|v| Value::Array(v.iter().map(num).collect())).collect();
    Ok(json!({ "basis": basis }))
}

// automorphisms ------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AutSpec {
    #[serde(default)]
    c: Option<Vec<Text>>,
    #[serde(rename = "M")]
    m: Matrix,
}

fn automorphism(pointer: &str, pres: &Arc<Presentation>, spec: &AutSpec) -> Result<Automorphism, CliError> {
    let mode = pres.mode();
    let c = match &spec.c {
        Some(c) => c
            .iter()
            .enumerate()
            .map(|(i, t)| input::scalar(&format!("{pointer}/c/{i}"), mode, t))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![Scalar::one(mode); pres.n()],
    };
    let m = input::int_matrix(&format!("{pointer}/M"), &spec.m)?;
    at(pointer, Automorphism::new(pres, c, m))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AutCheck {
    #[serde(rename = "H")]
    h: Option<Matrix>,
    #[serde(default)]
    kind: Kind,
    #[serde(default)]
    c: Option<Vec<Text>>,
    #[serde(rename = "M")]
    m: Matrix,
}

fn aut_check(p: &Value, opts: &Options) -> Outcome {
    let params: AutCheck = decode(p)?;
    let pres = input::presentation(params.h.as_ref(), params.kind, opts.mode)?;
    let aut = automorphism("", &pres, &AutSpec { c: params.c, m: params.m })?;
    let v = aut.verify(opts.mode)?;
    let anti = match canonical_factors(pres.h()) {
        Some(m) => match anti_aut_check(aut.matrix(), &m, opts.mode) {
            Ok(b) => Some(b),
            Err(qlpa::Error::LevelNotCoprime { .. }) => None,
            Err(e) => return Err(e.into()),
        },
        None => None,
    };
    Ok(json!({
        "mode": opts.mode.to_string(),
        "is_automorphism": v.is_automorphism,
        "q_membership": v.q_membership,
        "anti_automorphism": anti,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AutCompose {
    #[serde(rename = "H")]
    h: Option<Matrix>,
    #[serde(default)]
    kind: Kind,
    first: AutSpec,
    second: AutSpec,
}

fn aut_compose(p: &Value, opts: &Options) -> Outcome {
    let params: AutCompose = decode(p)?;
    let pres = input::presentation(params.h.as_ref(), params.kind, opts.mode)?;
    let first = automorphism("/first", &pres, &params.first)?;
    let second = automorphism("/second", &pres, &params.second)?;
    Ok(json!({ "composite": first.compose(&second)?.to_json() }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AutApply {
    #[serde(rename = "H")]
    h: Option<Matrix>,
    #[serde(default)]
    kind: Kind,
    aut: AutSpec,
    f: Value,
}

fn aut_apply(p: &Value, opts: &Options) -> Outcome {
    let params: AutApply = decode(p)?;
    let pres = input::presentation(params.h.as_ref(), params.kind, opts.mode)?;
    let aut = automorphism("/aut", &pres, &params.aut)?;
    let f = input::element("/f", &pres, &params.f)?;
    Ok(json!({ "image": element_json(&aut.apply_checked(&f)?) }))
}

// algebra ------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgMul {
    #[serde(rename = "H")]
    h: Option<Matrix>,
    #[serde(default)]
    kind: Kind,
    u: Value,
    v: Value,
}

fn alg_mul(p: &Value, opts: &Options) -> Outcome {
    let params: AlgMul = decode(p)?;
    let pres = input::presentation(params.h.as_ref(), params.kind, opts.mode)?;
    let u = input::element("/u", &pres, &params.u)?;
    let v = input::element("/v", &pres, &params.v)?;
    Ok(json!({ "product": element_json(&u.normal_mul(&v)?) }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitInv {
    #[serde(rename = "H")]
    h: Option<Matrix>,
    #[serde(default)]
    kind: Kind,
    u: Value,
}

fn unit_inv(p: &Value, opts: &Options) -> Outcome {
    let params: UnitInv = decode(p)?;
    let pres = input::presentation(params.h.as_ref(), params.kind, opts.mode)?;
    let u = input::element("/u", &pres, &params.u)?;
    let inv = u.inverse();
    Ok(json!({ "unit": inv.is_some(), "inverse": inv.as_ref().map(element_json) }))
}

fn structure(p: &Value) -> Outcome {
    let params: SkewParams = decode(p)?;
    let h = input::skew_matrix("/H", &params.h)?;
    let pres = Presentation::new(h, qlpa::qalgebra::AlgebraKind::Laurent, ScalarMode::Generic)?;
    let data = factorization_data(&pres)?;
    let pairs: Vec<Value> = data
        .pairs
        .iter()
        .map(|g| json!({ "first": g.first, "second": g.second, "twist": g.twist }))
        .collect();
    Ok(json!({ "pairs": pairs, "central": data.central }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Pair {
    a: i64,
    b: i64,
}

fn step_ops(p: &Value, opts: &Options) -> Outcome {
    let Pair { a, b } = decode(p)?;
    let s = step_operators(a, b, opts.mode)?;
    Ok(json!({
        "a": s.a, "b": s.b, "u": s.u, "v": s.v,
        "K": element_json(&s.k),
        "Xhat": element_json(&s.xhat),
        "Yhat": element_json(&s.yhat),
    }))
}

// modules ------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Simple {
    a: i64,
    b: i64,
    lambda: Text,
}

fn module_construct(p: &Value, opts: &Options) -> Outcome {
    let Simple { a, b, lambda } = decode(p)?;
    let lambda = input::scalar("/lambda", opts.mode, &lambda)?;
    let module = construct_simple(a, b, &lambda)?;
    let report = restriction_analysis(&module)?;
    let w = opts.window.0.abs().max(opts.window.1.abs());
    let relations = module_relation_check(&module, w);
    Ok(json!({
        "A": module.matrix(),
        "c": module.scalars().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "simple": report.simple,
        "k_on_one": report.k_on_one.map(|c| c.to_string()),
        "descriptor": report.descriptor.map(|d| d.to_string()),
        "relations_hold": relations.is_ok(),
        "relations_window": w,
    }))
}

/// `{a, b, lambda}` for a simple module, `{A, c}` for a twisted basic module,
/// nothing for the basic module.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ModuleSpec {
    a: Option<i64>,
    b: Option<i64>,
    lambda: Option<Text>,
    #[serde(rename = "A")]
    twist: Option<[[i64; 2]; 2]>,
    c: Option<[Text; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleAct {
    #[serde(default)]
    module: ModuleSpec,
    word: Option<String>,
    f: Option<Value>,
    vector: Option<BTreeMap<String, Text>>,
}

fn build_module(spec: &ModuleSpec, mode: ScalarMode) -> Result<Box<dyn ModuleAction>, CliError> {
    let malformed = |msg: &str| CliError::Malformed { pointer: "/module".into(), msg: msg.into() };
    match (spec.a, spec.b, &spec.lambda, &spec.twist) {
        (None, None, None, None) => {
            if spec.c.is_some() {
                return Err(malformed("c needs the twisting matrix A"));
            }
            Ok(Box::new(BasicModule { mode }))
        }
        (Some(a), Some(b), Some(lambda), None) if spec.c.is_none() => {
            let lambda = input::scalar("/module/lambda", mode, lambda)?;
            Ok(Box::new(construct_simple(a, b, &lambda)?))
        }
        (None, None, None, Some(twist)) => {
            let c = match &spec.c {
                Some([c1, c2]) => [input::scalar("/module/c/0", mode, c1)?, input::scalar("/module/c/1", mode, c2)?],
                None => [Scalar::one(mode), Scalar::one(mode)],
            };
            Ok(Box::new(TwistedBasicModule::new(*twist, c)?))
        }
        _ => Err(malformed("give either {a, b, lambda} or {A, c}")),
    }
}

fn module_act(p: &Value, opts: &Options) -> Outcome {
    let params: ModuleAct = decode(p)?;
    let mode = opts.mode;
    let module = build_module(&params.module, mode)?;
    let v = match &params.vector {
        Some(terms) => input::module_vector("/vector", mode, terms)?,
        None => ModuleVector::basis(mode, 0),
    };
    let out = match (&params.word, &params.f) {
        (Some(word), None) => module.act_word(&at("/word", parse_word(word))?, &v),
        (None, Some(f)) => {
            let torus = Presentation::quantum_plane(qlpa::qalgebra::AlgebraKind::Laurent, mode);
            module.act_element(&input::element("/f", &torus, f)?, &v)?
        }
        _ => {
            return Err(CliError::Malformed { pointer: String::new(), msg: "give exactly one of word and f".into() });
        }
    };
    Ok(json!({ "vector": vector_json(&out) }))
}

fn descriptor(pointer: &str, s: &Simple) -> Result<SimpleDescriptor, CliError> {
    let lambda = input::scalar(&format!("{pointer}/lambda"), ScalarMode::Generic, &s.lambda)?;
    SimpleDescriptor::from_scalar(s.a, s.b, &lambda)?
        .ok_or_else(|| qlpa::Error::NotMonomial(lambda.to_string()).into())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Iso {
    first: Simple,
    second: Simple,
}

fn iso(p: &Value) -> Outcome {
    let params: Iso = decode(p)?;
    let d1 = descriptor("/first", &params.first)?;
    let d2 = descriptor("/second", &params.second)?;
    Ok(json!({ "isomorphic": iso_test(&d1, &d2), "first": d1.to_string(), "second": d2.to_string() }))
}

// q-difference operators ---------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QdeSolve {
    n: i64,
    a: Text,
    k: Option<i64>,
}

fn solution_json(s: &FirstOrderSolution, t: i64) -> Result<Value, CliError> {
    let (num, den) = s.exponent();
    Ok(json!({
        "exponent": [num, den],
        "g": s.g.to_string(),
        "scale": s.scale.to_string(),
        "series": s.series(t)?.to_string(),
    }))
}

fn qde_solve(p: &Value, opts: &Options) -> Outcome {
    let params: QdeSolve = decode(p)?;
    let t = opts.trunc;
    let a = input::series("/a", &params.a, t)?;
    let sols = match params.k {
        Some(k) => vec![solve_ramified(params.n, k, &a, t)?],
        None => solve_first_order(params.n, &a, t)?,
    };
    Ok(json!({
        "operator": first_order_operator(params.n, &a).to_json(),
        "solutions": sols.iter().map(|s| solution_json(s, t)).collect::<Result<Vec<_>, _>>()?,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QdeVerify {
    #[serde(rename = "P")]
    p: Value,
    f: Text,
}

fn qde_verify(p: &Value, opts: &Options) -> Outcome {
    let params: QdeVerify = decode(p)?;
    let t = opts.trunc;
    let f = input::series("/f", &params.f, t)?;
    let mut op = input::operator("/P", &params.p, t)?;
    if op.denom() != f.denom() {
        op = op.lift(f.denom())?;
    }
    Ok(json!({ "annihilates": verify_annihilation(&op, &f, t), "order": t, "residual": op.apply(&f).to_string() }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Factor2 {
    #[serde(rename = "P")]
    p: Value,
}

fn factor2(p: &Value, opts: &Options) -> Outcome {
    let params: Factor2 = decode(p)?;
    let op = input::operator("/P", &params.p, opts.trunc)?;
    let found = factor_degree2(&op, opts.window, opts.trunc)?;
    let pairs: Vec<Value> = found
        .factorizations
        .iter()
        .map(|f| json!({ "alpha": f.alpha.to_string(), "beta": f.beta.to_string(), "checked_to": f.checked_to }))
        .collect();
    Ok(json!({
        "window": [opts.window.0, opts.window.1],
        "factorizations": pairs,
        "markers": found.markers.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
    }))
}

fn dq_module(p: &Value, opts: &Options) -> Outcome {
    let Simple { a, b, lambda } = decode(p)?;
    let lambda: QRational = at("/lambda", QRational::parse(&lambda.0))?;
    let w = opts.window.0.abs().max(opts.window.1.abs());
    let dq = dq_quotient_module(a, b, &lambda, w, opts.trunc)?;
    let spectrum: Vec<Value> =
        dq.spectrum.iter().map(|s| json!({ "i": s.i, "beta": s.beta, "exponent": s.exponent })).collect();
    Ok(json!({
        "a": a,
        "b": b,
        "lambda": lambda.to_string(),
        "rank": dq.module.rank(),
        "spectrum": spectrum,
        "exponents_distinct": dq.exponents_distinct,
        "v_b_holds": dq.v_b_holds,
        "v_minus1_holds": dq.v_minus1_holds,
        "step_shifts": [dq.step_shifts.0, dq.step_shifts.1],
        "descriptor": dq.descriptor.map(|d| d.to_string()),
    }))
}

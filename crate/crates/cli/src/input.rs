//! Typed request parameters. Type errors carry the JSON pointer of the
//! offending value; text fields are parsed afterwards with [`at`] so that
//! their errors point at the field as well.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::de::{self, DeserializeOwned, Deserializer, Visitor};
use serde::Deserialize;
use serde_json::Value;

use qlpa::intlinalg::{IntMatrix, SkewMatrix};
use qlpa::qalgebra::{AlgebraElement, AlgebraKind, Presentation};
use qlpa::qdiff::{LaurentSeries, QDiffOperator};
use qlpa::qscalar::{Scalar, ScalarMode};

use crate::CliError;

/// Deserializes `v`, reporting the path of the first mismatch.
pub fn decode<T: DeserializeOwned>(v: &Value) -> Result<T, CliError> {
    serde_path_to_error::deserialize(v.clone()).map_err(|e| CliError::Malformed {
        pointer: pointer_of(e.path()),
        msg: e.inner().to_string(),
    })
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    path.iter()
        .map(|seg| match seg {
            Segment::Seq { index } => format!("/{index}"),
            Segment::Map { key } => format!("/{}", key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => format!("/{variant}"),
            Segment::Unknown => "/?".to_string(),
        })
        .collect()
}

/// Attaches `pointer` to parse and shape errors raised while reading a field.
pub fn at<T>(pointer: &str, r: qlpa::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| match e {
        qlpa::Error::Parse { .. } | qlpa::Error::Dimension(_) => {
            CliError::Malformed { pointer: pointer.to_string(), msg: e.to_string() }
        }
        other => CliError::Domain(other),
    })
}

/// An integer of any size, written as a JSON number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        n.to_string().parse().map(Int).map_err(|_| de::Error::custom(format!("expected an integer, got {n}")))
    }
}

pub type Matrix = Vec<Vec<Int>>;

pub fn int_matrix(pointer: &str, rows: &Matrix) -> Result<IntMatrix, CliError> {
    let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect();
    at(pointer, IntMatrix::from_rows(&rows))
}

pub fn skew_matrix(pointer: &str, rows: &Matrix) -> Result<SkewMatrix, CliError> {
    Ok(SkewMatrix::new(int_matrix(pointer, rows)?)?)
}

/// Scalar text; bare JSON numbers are accepted too.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Text(pub String);

impl<'de> Deserialize<'de> for Text {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Text;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a string or a number")
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<Text, E> {
                Ok(Text(s.to_string()))
            }

            fn visit_i64<E: de::Error>(self, n: i64) -> Result<Text, E> {
                Ok(Text(n.to_string()))
            }

            fn visit_u64<E: de::Error>(self, n: u64) -> Result<Text, E> {
                Ok(Text(n.to_string()))
            }

            fn visit_map<A: de::MapAccess<'de>>(self, map: A) -> Result<Text, A::Error> {
                // arbitrary-precision numbers arrive as a one-entry map
                let n = serde_json::Number::deserialize(de::value::MapAccessDeserializer::new(map))?;
                Ok(Text(n.to_string()))
            }
        }
        d.deserialize_any(V)
    }
}

pub fn scalar(pointer: &str, mode: ScalarMode, t: &Text) -> Result<Scalar, CliError> {
    at(pointer, Scalar::parse(mode, &t.0))
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    #[default]
    Laurent,
    Polynomial,
}

impl From<Kind> for AlgebraKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Laurent => AlgebraKind::Laurent,
            Kind::Polynomial => AlgebraKind::Polynomial,
        }
    }
}

/// `L_q[H]` or `A_q[H]`; without `H` the quantum plane.
pub fn presentation(h: Option<&Matrix>, kind: Kind, mode: ScalarMode) -> Result<Arc<Presentation>, CliError> {
    match h {
        Some(rows) => Ok(Presentation::new(skew_matrix("/H", rows)?, kind.into(), mode)?),
        None => Ok(Presentation::quantum_plane(kind.into(), mode)),
    }
}

/// An element given as text or as `{"terms": [..]}`.
pub fn element(pointer: &str, pres: &Arc<Presentation>, v: &Value) -> Result<AlgebraElement, CliError> {
    match v {
        Value::String(s) => at(pointer, AlgebraElement::parse(pres, s)),
        Value::Object(_) => at(pointer, AlgebraElement::from_json(pres, v)),
        _ => Err(CliError::Malformed { pointer: pointer.to_string(), msg: "expected element text or a terms object".into() }),
    }
}

pub fn series(pointer: &str, t: &Text, cap: i64) -> Result<LaurentSeries, CliError> {
    at(pointer, LaurentSeries::parse(&t.0, cap))
}

/// An operator given as text or as `{"j": "series"}`.
pub fn operator(pointer: &str, v: &Value, cap: i64) -> Result<QDiffOperator, CliError> {
    match v {
        Value::String(s) => at(pointer, QDiffOperator::parse(s, cap)),
        Value::Object(_) => at(pointer, QDiffOperator::from_json(v, cap)),
        _ => Err(CliError::Malformed { pointer: pointer.to_string(), msg: "expected operator text or a {\"j\": series} object".into() }),
    }
}

/// `{"m": "coeff"}` keyed by the exponent of `t`.
pub fn module_vector(
    pointer: &str,
    mode: ScalarMode,
    terms: &BTreeMap<String, Text>,
) -> Result<qlpa::repn::ModuleVector, CliError> {
    let mut out = Vec::with_capacity(terms.len());
    for (k, c) in terms {
        let here = format!("{pointer}/{k}");
        let m: i64 = k
            .parse()
            .map_err(|_| CliError::Malformed { pointer: here.clone(), msg: format!("{k:?} is not an exponent of t") })?;
        out.push((m, scalar(&here, mode, c)?));
    }
    Ok(qlpa::repn::ModuleVector::from_terms(mode, out)?)
}

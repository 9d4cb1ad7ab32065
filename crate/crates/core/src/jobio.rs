//! JSON formats for matrices, tuples, realizations, certificates and
//! decompositions. Rationals travel as "p/q" strings (lossless), floats
//! as numbers; complex values as [re, im] pairs. Keys serialize in sorted
//! order, so identical inputs yield byte-identical documents.

use num::complex::Complex64;
use num::rational::BigRational;
use serde_json::{json, Map, Value};

use crate::matrixkit::{Matrix, MatrixTuple};
use crate::realization::{Realization, Thresholds};
use crate::scalarkit::{Cx, Field, Rat};
use crate::waring::{Decomposition, DecompositionKind, Term, TermList};
use crate::witness::WitnessCertificate;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum IoError {
    #[error("malformed document: {0}")]
    Malformed(String),
}

fn bad(msg: impl Into<String>) -> IoError {
    IoError::Malformed(msg.into())
}

/// Scalar <-> JSON encoding per backend.
pub trait JsonScalar: Field {
    fn scalar_to_json(&self) -> Value;
    fn scalar_from_json(v: &Value) -> Result<Self, IoError>;
}

impl JsonScalar for Rat {
    fn scalar_to_json(&self) -> Value {
        Value::String(self.0.to_string())
    }

    fn scalar_from_json(v: &Value) -> Result<Self, IoError> {
        match v {
            Value::String(s) => {
                Rat::parse(s).ok_or_else(|| bad(format!("not a rational: {s}")))
            }
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Rat::int(i))
                } else {
                    let f = n.as_f64().ok_or_else(|| bad("unrepresentable number"))?;
                    let r = BigRational::from_float(f)
                        .ok_or_else(|| bad(format!("non-finite number {f}")))?;
                    Ok(Rat(r))
                }
            }
            other => Err(bad(format!("expected a rational, got {other}"))),
        }
    }
}

impl JsonScalar for Cx {
    fn scalar_to_json(&self) -> Value {
        if self.0.im == 0.0 {
            json!(self.0.re)
        } else {
            json!([self.0.re, self.0.im])
        }
    }

    fn scalar_from_json(v: &Value) -> Result<Self, IoError> {
        match v {
            Value::Number(n) => {
                let f = n.as_f64().ok_or_else(|| bad("unrepresentable number"))?;
                Ok(Cx(Complex64::new(f, 0.0)))
            }
            Value::String(s) => {
                let r = Rat::parse(s).ok_or_else(|| bad(format!("not a scalar: {s}")))?;
                Ok(Cx(r.to_c64()))
            }
            Value::Array(parts) if parts.len() == 2 => {
                let re = parts[0].as_f64().ok_or_else(|| bad("bad real part"))?;
                let im = parts[1].as_f64().ok_or_else(|| bad("bad imaginary part"))?;
                Ok(Cx(Complex64::new(re, im)))
            }
            other => Err(bad(format!("expected a complex scalar, got {other}"))),
        }
    }
}

pub fn matrix_to_json<K: JsonScalar>(m: &Matrix<K>) -> Value {
    let entries: Vec<Value> = (0..m.nrows())
        .map(|i| {
            Value::Array(
                (0..m.ncols())
                    .map(|j| m.get(i, j).scalar_to_json())
                    .collect(),
            )
        })
        .collect();
    json!({ "n": m.nrows(), "entries": entries })
}

pub fn matrix_from_json<K: JsonScalar>(v: &Value) -> Result<Matrix<K>, IoError> {
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("matrix needs an `entries` array"))?;
    let n = v
        .get("n")
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .unwrap_or(entries.len());
    if entries.len() != n {
        return Err(bad(format!("expected {n} rows, got {}", entries.len())));
    }
    let mut rows = Vec::with_capacity(n);
    for row in entries {
        let row = row.as_array().ok_or_else(|| bad("row must be an array"))?;
        if row.len() != n {
            return Err(bad("matrix must be square"));
        }
        rows.push(
            row.iter()
                .map(K::scalar_from_json)
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(Matrix::from_rows(rows))
}

pub fn tuple_to_json<K: JsonScalar>(t: &MatrixTuple<K>) -> Value {
    json!({
        "m": t.m(),
        "matrices": t.components().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn tuple_from_json<K: JsonScalar>(v: &Value) -> Result<MatrixTuple<K>, IoError> {
    let mats = v
        .get("matrices")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("tuple needs a `matrices` array"))?;
    if mats.is_empty() {
        return Err(bad("tuple needs at least one matrix"));
    }
    if let Some(m) = v.get("m").and_then(Value::as_u64) {
        if m as usize != mats.len() {
            return Err(bad("tuple length disagrees with `m`"));
        }
    }
    let blocks = mats
        .iter()
        .map(matrix_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    let n = blocks[0].nrows();
    if !blocks.iter().all(|b| b.is_square() && b.nrows() == n) {
        return Err(bad("tuple components must be square and uniformly sized"));
    }
    Ok(MatrixTuple::new(blocks))
}

pub fn realization_to_json(r: &Realization) -> Value {
    let blocks: Vec<Value> = (0..=r.nvars())
        .map(|k| {
            let a = r.coefficient(k);
            Value::Array(
                (0..a.nrows())
                    .map(|i| {
                        Value::Array(
                            (0..a.ncols())
                                .map(|j| Value::String(a.get(i, j).0.to_string()))
                                .collect(),
                        )
                    })
                    .collect(),
            )
        })
        .collect();
    json!({
        "delta": r.delta(),
        "A": blocks,
        "b": r.b().iter().map(|x| Value::String(x.0.to_string())).collect::<Vec<_>>(),
        "c": r.c().iter().map(|x| Value::String(x.0.to_string())).collect::<Vec<_>>(),
    })
}

pub fn realization_from_json(v: &Value) -> Result<Realization, IoError> {
    let delta = v
        .get("delta")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("realization needs `delta`"))? as usize;
    let blocks = v
        .get("A")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("realization needs `A`"))?;
    if blocks.is_empty() {
        return Err(bad("`A` needs at least the constant block"));
    }
    let mut a = Vec::with_capacity(blocks.len());
    for blk in blocks {
        let m: Matrix<Rat> = matrix_from_json(&json!({ "n": delta, "entries": blk }))?;
        if m.nrows() != delta {
            return Err(bad("pencil block size disagrees with delta"));
        }
        a.push(m);
    }
    let vecs = |key: &str| -> Result<Vec<Rat>, IoError> {
        v.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| bad(format!("realization needs `{key}`")))?
            .iter()
            .map(Rat::scalar_from_json)
            .collect()
    };
    let b = vecs("b")?;
    let c = vecs("c")?;
    if b.len() != delta || c.len() != delta {
        return Err(bad("vector lengths disagree with delta"));
    }
    Ok(Realization::new(a, b, c))
}

pub fn thresholds_to_json(t: &Thresholds) -> Value {
    let mut m = Map::new();
    m.insert("delta".into(), json!(t.delta));
    m.insert("n_domain_nonempty".into(), json!(t.n_domain_nonempty));
    m.insert("n_noncentral".into(), json!(t.n_noncentral));
    m.insert("p".into(), json!(t.p));
    m.insert("q".into(), json!(t.q));
    m.insert("n_distinct".into(), json!(t.n_distinct));
    m.insert("bertrand_bound".into(), json!(t.bertrand_bound));
    if let Some(d) = t.poly_noncentral {
        m.insert("poly_noncentral".into(), json!(d));
    }
    Value::Object(m)
}

pub fn certificate_to_json(c: &WitnessCertificate) -> Value {
    json!({
        "n": c.n,
        "tuple": tuple_to_json(&c.x),
        "value": matrix_to_json(&c.value),
        "chi": c.chi.coeffs().iter().map(|x| Value::String(x.0.to_string())).collect::<Vec<_>>(),
        "disc_nonzero": c.disc_nonzero,
        "det_nonzero": c.det_nonzero,
        "seed": c.seed,
        "trial": c.trial,
    })
}

fn term_to_json<K: JsonScalar>(t: &Term<K>) -> Value {
    json!({
        "coefficient": t.coefficient.0.to_string(),
        "inverted": t.inverted,
        "tuple": tuple_to_json(&t.tuple),
    })
}

pub fn decomposition_to_json(d: &Decomposition) -> Value {
    let (backend, terms): (&str, Vec<Value>) = match &d.terms {
        TermList::Exact(ts) => ("exact", ts.iter().map(term_to_json).collect()),
        TermList::Approx(ts) => ("float", ts.iter().map(term_to_json).collect()),
    };
    json!({
        "kind": d.kind.as_str(),
        "backend": backend,
        "seed": d.seed,
        "residual": d.residual,
        "target": matrix_to_json(&d.target),
        "terms": terms,
    })
}

pub fn kind_from_str(s: &str) -> Option<DecompositionKind> {
    Some(match s {
        "difference" => DecompositionKind::Difference,
        "linear2" => DecompositionKind::LinearTwo,
        "linear3" => DecompositionKind::LinearThree,
        "quotient" => DecompositionKind::Quotient,
        "product2" => DecompositionKind::ProductTwo,
        "product3" => DecompositionKind::ProductThree,
        "product12" => DecompositionKind::ProductTwelve,
        _ => return None,
    })
}

/// Parses a decomposition document back into replayable form.
pub fn decomposition_from_json(v: &Value) -> Result<Decomposition, IoError> {
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .and_then(kind_from_str)
        .ok_or_else(|| bad("decomposition needs a valid `kind`"))?;
    let backend = v
        .get("backend")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("decomposition needs `backend`"))?;
    let seed = v.get("seed").and_then(Value::as_u64).unwrap_or(0);
    let residual = v.get("residual").and_then(Value::as_f64).unwrap_or(0.0);
    let target = matrix_from_json::<Rat>(
        v.get("target").ok_or_else(|| bad("missing `target`"))?,
    )?;
    let raw_terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing `terms`"))?;
    fn parse_terms<K: JsonScalar>(raw: &[Value]) -> Result<Vec<Term<K>>, IoError> {
        raw.iter()
            .map(|t| {
                let coefficient = Rat::scalar_from_json(
                    t.get("coefficient").ok_or_else(|| bad("term needs `coefficient`"))?,
                )?;
                let inverted = t.get("inverted").and_then(Value::as_bool).unwrap_or(false);
                let tuple = tuple_from_json(
                    t.get("tuple").ok_or_else(|| bad("term needs `tuple`"))?,
                )?;
                Ok(Term {
                    coefficient,
                    inverted,
                    tuple,
                })
            })
            .collect()
    }
    let terms = match backend {
        "exact" => TermList::Exact(parse_terms::<Rat>(raw_terms)?),
        "float" => TermList::Approx(parse_terms::<Cx>(raw_terms)?),
        other => return Err(bad(format!("unknown backend `{other}`"))),
    };
    Ok(Decomposition {
        kind,
        terms,
        target,
        residual,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncexpr::parse;
    use crate::realization::from_expr;

    #[test]
    fn matrix_round_trip_exact() {
        let m = Matrix::<Rat>::from_rows(vec![
            vec![Rat::new(1, 2), Rat::int(-3)],
            vec![Rat::int(0), Rat::new(7, 5)],
        ]);
        let v = matrix_to_json(&m);
        assert_eq!(matrix_from_json::<Rat>(&v).unwrap(), m);
        // float inputs are accepted losslessly in the exact backend
        let f: Matrix<Rat> =
            matrix_from_json(&json!({"n": 1, "entries": [[0.5]]})).unwrap();
        assert_eq!(*f.get(0, 0), Rat::new(1, 2));
    }

    #[test]
    fn matrix_round_trip_complex() {
        let m = Matrix::<Cx>::from_rows(vec![
            vec![Cx::new(1.5, 0.0), Cx::new(0.0, -2.0)],
            vec![Cx::new(0.25, 0.75), Cx::new(3.0, 0.0)],
        ]);
        let v = matrix_to_json(&m);
        assert_eq!(matrix_from_json::<Cx>(&v).unwrap(), m);
    }

    #[test]
    fn realization_round_trip() {
        let r = from_expr(&parse("(x1*x2 - x2*x1)^-1", 2).unwrap());
        let v = realization_to_json(&r);
        let back = realization_from_json(&v).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(matrix_from_json::<Rat>(&json!({"entries": [[1, 2]]})).is_err());
        assert!(matrix_from_json::<Rat>(&json!({"n": 2, "entries": [["1/0", "2"], ["3", "4"]]})).is_err());
        assert!(tuple_from_json::<Rat>(&json!({"m": 2, "matrices": []})).is_err());
    }
}

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use serde_json::Value;

use super::{parse_surint, SchemaError, TextError};
use crate::division::{DivisionTrace, StepKind};
use crate::napoly::{Component, FamilyLength, NakedPoly, SeriesBlock, TermFamily};
use crate::ratpoly::{RatPoly, Q};

const SCHEMA_VERSION: u64 = 1;

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FamilyJson {
    coeff_poly: Vec<String>,
    ratio: String,
    start_exp: String,
    step: u64,
    length: Value,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SeriesJson {
    start_exp: String,
    numerator: Vec<String>,
    denominator: Vec<String>,
}

#[derive(Serialize)]
struct PolyJson {
    families: Vec<FamilyJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    series: Vec<SeriesJson>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Versioned<T> {
    schema_version: u64,
    #[serde(flatten)]
    body: T,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct StepJson {
    kind: &'static str,
    quotient_increment: PolyJson,
    remainder_after: PolyJson,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TerminationJson {
    limit_jumps: u64,
    successors: u64,
}

#[derive(Serialize)]
struct TraceJson {
    quotient: PolyJson,
    remainder: PolyJson,
    termination: TerminationJson,
    exhausted: bool,
    steps: Vec<StepJson>,
}

fn rat(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn rats(v: &[Q]) -> Vec<String> {
    v.iter().map(rat).collect()
}

fn family_json(f: &TermFamily) -> FamilyJson {
    FamilyJson {
        coeff_poly: rats(&f.coeff_poly),
        ratio: rat(&f.ratio),
        start_exp: f.start_exp.to_string(),
        step: f.step,
        length: match f.length {
            FamilyLength::Omega => Value::from("omega"),
            FamilyLength::Finite(k) => Value::from(k),
        },
    }
}

fn series_json(s: &SeriesBlock) -> SeriesJson {
    SeriesJson {
        start_exp: s.start_exp.to_string(),
        numerator: rats(&s.numerator),
        denominator: rats(&s.denominator),
    }
}

fn poly_json(p: &NakedPoly) -> PolyJson {
    let mut out = PolyJson {
        families: Vec::new(),
        series: Vec::new(),
    };
    for c in p.components() {
        match c {
            Component::Family(f) => out.families.push(family_json(&f)),
            Component::Series(s) => out.series.push(series_json(&s)),
        }
    }
    out
}

/// The polynomial as a JSON value without the version field, for embedding.
pub fn poly_json_value(p: &NakedPoly) -> Value {
    serde_json::to_value(poly_json(p)).expect("serializable")
}

pub fn to_json(p: &NakedPoly) -> String {
    serde_json::to_string(&Versioned {
        schema_version: SCHEMA_VERSION,
        body: poly_json(p),
    })
    .expect("serializable")
}

pub fn trace_to_json(t: &DivisionTrace) -> String {
    let body = TraceJson {
        quotient: poly_json(&t.quotient),
        remainder: poly_json(&t.remainder),
        termination: TerminationJson {
            limit_jumps: t.termination.limit_jumps,
            successors: t.termination.successors,
        },
        exhausted: t.exhausted,
        steps: t
            .steps
            .iter()
            .map(|s| StepJson {
                kind: match s.kind {
                    StepKind::Successor => "successor",
                    StepKind::LimitJump => "limitJump",
                },
                quotient_increment: poly_json(&s.quotient_increment),
                remainder_after: poly_json(&s.remainder_after),
            })
            .collect(),
    };
    serde_json::to_string(&Versioned {
        schema_version: SCHEMA_VERSION,
        body,
    })
    .expect("serializable")
}

fn schema(path: &str, message: impl Into<String>) -> TextError {
    SchemaError {
        path: path.into(),
        message: message.into(),
    }
    .into()
}

fn field<'v>(obj: &'v Value, path: &str, key: &str) -> Result<&'v Value, TextError> {
    obj.get(key)
        .ok_or_else(|| schema(path, format!("missing field \"{key}\"")))
}

fn read_rat(v: &Value, path: &str) -> Result<Q, TextError> {
    let s = v
        .as_str()
        .ok_or_else(|| schema(path, "expected a rational string like \"-3/4\""))?;
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let bad = || schema(path, format!("malformed rational {s:?}"));
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(schema(path, "zero denominator"));
    }
    Ok(Q::new(n, d))
}

fn read_rats(v: &Value, path: &str) -> Result<Vec<Q>, TextError> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema(path, "expected an array of rationals"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| read_rat(x, &format!("{path}[{i}]")))
        .collect()
}

fn read_exp(v: &Value, path: &str) -> Result<crate::exponents::Surinteger, TextError> {
    let s = v
        .as_str()
        .ok_or_else(|| schema(path, "expected a surinteger string"))?;
    parse_surint(s).map_err(|e| match e {
        TextError::Parse(p) => schema(path, p.to_string()),
        other => other,
    })
}

fn read_family(v: &Value, path: &str) -> Result<NakedPoly, TextError> {
    if !v.is_object() {
        return Err(schema(path, "expected an object"));
    }
    let coeffs = read_rats(field(v, path, "coeffPoly")?, &format!("{path}.coeffPoly"))?;
    let ratio = read_rat(field(v, path, "ratio")?, &format!("{path}.ratio"))?;
    let start = read_exp(field(v, path, "startExp")?, &format!("{path}.startExp"))?;
    let step = field(v, path, "step")?
        .as_u64()
        .filter(|&s| s > 0)
        .ok_or_else(|| schema(&format!("{path}.step"), "expected a positive integer"))?;
    let lpath = format!("{path}.length");
    let length = match field(v, path, "length")? {
        Value::String(s) if s == "omega" => FamilyLength::Omega,
        other => FamilyLength::Finite(
            other
                .as_u64()
                .ok_or_else(|| schema(&lpath, "expected \"omega\" or a nonnegative integer"))?,
        ),
    };
    Ok(NakedPoly::family(&coeffs, &ratio, &start, step, length)?)
}

fn read_series(v: &Value, path: &str) -> Result<NakedPoly, TextError> {
    if !v.is_object() {
        return Err(schema(path, "expected an object"));
    }
    let start = read_exp(field(v, path, "startExp")?, &format!("{path}.startExp"))?;
    let num = read_rats(field(v, path, "numerator")?, &format!("{path}.numerator"))?;
    let dpath = format!("{path}.denominator");
    let den = read_rats(field(v, path, "denominator")?, &dpath)?;
    if den.first().is_none_or(|d| d.is_zero()) {
        return Err(schema(&dpath, "constant term must be nonzero"));
    }
    Ok(NakedPoly::from_series(
        &start,
        RatPoly::from_coeffs(num),
        RatPoly::from_coeffs(den),
    )?)
}

/// Reads a polynomial document. `schemaVersion`, when present, must be 1.
pub fn from_json(text: &str) -> Result<NakedPoly, TextError> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema("$", e.to_string()))?;
    if !v.is_object() {
        return Err(schema("$", "expected an object"));
    }
    if let Some(ver) = v.get("schemaVersion") {
        if ver.as_u64() != Some(SCHEMA_VERSION) {
            return Err(schema("$.schemaVersion", "unsupported schema version"));
        }
    }
    let fams = field(&v, "$", "families")?
        .as_array()
        .ok_or_else(|| schema("$.families", "expected an array"))?;
    let mut acc = NakedPoly::zero();
    for (i, f) in fams.iter().enumerate() {
        acc = acc.add(&read_family(f, &format!("$.families[{i}]"))?)?;
    }
    if let Some(series) = v.get("series") {
        let arr = series
            .as_array()
            .ok_or_else(|| schema("$.series", "expected an array"))?;
        for (i, s) in arr.iter().enumerate() {
            acc = acc.add(&read_series(s, &format!("$.series[{i}]"))?)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::divmod;
    use crate::textio::parse_poly;

    #[test]
    fn zero_and_family_documents() {
        assert_eq!(to_json(&NakedPoly::zero()), r#"{"schemaVersion":1,"families":[]}"#);
        let fam = parse_poly("sum(n<w, (-1)^n * X^(w - 2*(n+1)))").unwrap();
        let text = to_json(&fam);
        assert_eq!(
            text,
            r#"{"schemaVersion":1,"families":[{"coeffPoly":["1/1"],"ratio":"-1/1","startExp":"w - 2","step":2,"length":"omega"}]}"#
        );
        assert_eq!(from_json(&text).unwrap(), fam);
    }

    #[test]
    fn version_is_optional_on_input() {
        let text = r#"{"families":[{"coeffPoly":["1/1"],"ratio":"-1/1","startExp":"w - 2","step":2,"length":"omega"}]}"#;
        assert_eq!(from_json(text).unwrap(), parse_poly("sum(n<w, (-1)^n * X^(w - 2*(n+1)))").unwrap());
    }

    #[test]
    fn series_round_trip() {
        let p = parse_poly("X^(w^2) + series(X^(w), [1], [1, -1, -1])").unwrap();
        let text = to_json(&p);
        assert!(text.contains(r#""series":[{"startExp":"w","numerator":["1/1"],"denominator":["1/1","-1/1","-1/1"]}]"#));
        assert_eq!(from_json(&text).unwrap(), p);
    }

    #[test]
    fn schema_errors_carry_paths() {
        let bad = r#"{"families":[{"coeffPoly":["1/1"],"ratio":"x","startExp":"w","step":1,"length":"omega"}]}"#;
        match from_json(bad) {
            Err(TextError::Schema(e)) => assert_eq!(e.path, "$.families[0].ratio"),
            other => panic!("unexpected {other:?}"),
        }
        let missing = r#"{"families":[{"coeffPoly":[],"ratio":"1","startExp":"w","length":3}]}"#;
        match from_json(missing) {
            Err(TextError::Schema(e)) => {
                assert_eq!(e.path, "$.families[0]");
                assert_eq!(e.message, "missing field \"step\"");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(from_json(r#"{"schemaVersion":2,"families":[]}"#), Err(TextError::Schema(_))));
        assert!(matches!(from_json("[1,"), Err(TextError::Schema(_))));
    }

    #[test]
    fn trace_document() {
        let t = divmod(&parse_poly("X^(w)").unwrap(), &parse_poly("X^2 + 1").unwrap(), 100).unwrap();
        let v: Value = serde_json::from_str(&trace_to_json(&t)).unwrap();
        assert_eq!(v["termination"]["limitJumps"], 1);
        assert_eq!(v["termination"]["successors"], 0);
        assert_eq!(v["remainder"]["families"], serde_json::json!([]));
        assert_eq!(v["steps"][4]["kind"], "limitJump");
        assert_eq!(v["exhausted"], false);
    }
}

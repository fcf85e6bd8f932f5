//! Reading a JSON report back into verification records, and converting
//! its meta block between the serde document model and the report writer's
//! own JSON model.

use std::str::FromStr;

use serde_json::Value;
use zeta_mellin::lambda::Provenance;
use zeta_mellin::report::{JsonValue, VerificationRecord};
use zeta_mellin::IdentityId;

pub fn records_from_json(doc: &Value) -> Result<Vec<VerificationRecord>, String> {
    let arr = doc
        .get("records")
        .and_then(Value::as_array)
        .ok_or_else(|| "report has no records array".to_string())?;
    arr.iter().map(record_from_json).collect()
}

fn record_from_json(v: &Value) -> Result<VerificationRecord, String> {
    let id = v
        .get("id")
        .and_then(Value::as_str)
        .ok_or_else(|| "record missing id".to_string())?;
    let id = IdentityId::from_str(id).map_err(|e| e.to_string())?;
    // Numeric fields may be null (a point that errored); those become NaN.
    let num = |k: &str| v.get(k).and_then(Value::as_f64).unwrap_or(f64::NAN);
    let point = v
        .get("point")
        .and_then(Value::as_f64)
        .ok_or_else(|| "record missing point".to_string())?;
    let pass = v
        .get("pass")
        .and_then(Value::as_bool)
        .ok_or_else(|| "record missing pass".to_string())?;
    let convention = match v.get("convention").and_then(Value::as_str) {
        Some("paper-printed") => Provenance::PaperPrinted,
        Some("oracle-resolved") => Provenance::OracleResolved,
        other => return Err(format!("record has unknown convention {other:?}")),
    };
    let sigma = v
        .get("sigma")
        .and_then(Value::as_i64)
        .ok_or_else(|| "record missing sigma".to_string())? as i8;
    Ok(VerificationRecord {
        id,
        point,
        lhs: num("lhs"),
        rhs: num("rhs"),
        abs_err: num("abs_err"),
        rel_err: num("rel_err"),
        tol: num("tol"),
        pass,
        convention,
        sigma,
        lhs_quad_err: num("lhs_quad_err"),
        rhs_quad_err: num("rhs_quad_err"),
    })
}

/// The meta block as writer-model pairs (empty when absent).
pub fn meta_pairs(doc: &Value) -> Vec<(String, JsonValue)> {
    match doc.get("meta").and_then(Value::as_object) {
        Some(map) => map.iter().map(|(k, v)| (k.clone(), convert(v))).collect(),
        None => Vec::new(),
    }
}

/// The meta block as `key = value` comment lines for the CSV writer.
pub fn meta_csv_lines(doc: &Value) -> Vec<String> {
    meta_pairs(doc)
        .iter()
        .map(|(k, v)| format!("{k} = {}", v.to_json_string()))
        .collect()
}

fn convert(v: &Value) -> JsonValue {
    match v {
        Value::Null => JsonValue::Null,
        Value::Bool(b) => JsonValue::Bool(*b),
        Value::Number(n) => JsonValue::Num(n.to_string()),
        Value::String(s) => JsonValue::str(s.clone()),
        Value::Array(a) => JsonValue::Arr(a.iter().map(convert).collect()),
        Value::Object(o) => JsonValue::Obj(o.iter().map(|(k, v)| (k.clone(), convert(v))).collect()),
    }
}

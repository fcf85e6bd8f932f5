//! Verification records and their JSON/CSV serialization.
//!
//! The writers are deliberately hand-rolled: every float is emitted with 17
//! significant digits (`{:.16e}`), which round-trips f64 exactly, and NaN
//! from failed points becomes JSON `null` / CSV `NaN` instead of poisoning
//! the document.

use crate::lambda::Provenance;
use crate::mellin::IdentityId;

/// One verified (identity, point, convention) triple.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRecord {
    pub id: IdentityId,
    pub point: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub pass: bool,
    pub convention: Provenance,
    pub sigma: i8,
    pub lhs_quad_err: f64,
    pub rhs_quad_err: f64,
}

/// 17-significant-digit float formatting; round-trips every finite f64.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn provenance_rank(p: Provenance) -> u8 {
    match p {
        Provenance::PaperPrinted => 0,
        Provenance::OracleResolved => 1,
    }
}

/// Deterministic report order: identity, then point, then convention, then
/// sign. Total order even with NaN points.
pub fn sort_records(records: &mut [VerificationRecord]) {
    records.sort_by(|a, b| {
        a.id.cmp(&b.id)
            .then(a.point.total_cmp(&b.point))
            .then(provenance_rank(a.convention).cmp(&provenance_rank(b.convention)))
            .then(a.sigma.cmp(&b.sigma))
    });
}

pub fn all_pass(records: &[VerificationRecord]) -> bool {
    !records.is_empty() && records.iter().all(|r| r.pass)
}

/// Minimal JSON document model. Numbers are stored preformatted so the
/// writer never has to guess a float representation.
#[derive(Debug, Clone, PartialEq)]
pub enum JsonValue {
    Null,
    Bool(bool),
    Num(String),
    Str(String),
    Arr(Vec<JsonValue>),
    Obj(Vec<(String, JsonValue)>),
}

impl JsonValue {
    /// Finite floats become 17-digit numbers; NaN and infinities become null.
    pub fn number(v: f64) -> JsonValue {
        if v.is_finite() {
            JsonValue::Num(fmt_float(v))
        } else {
            JsonValue::Null
        }
    }

    pub fn int(v: i64) -> JsonValue {
        JsonValue::Num(v.to_string())
    }

    /// Shortest round-trip representation, used for grid points so that the
    /// report echoes exactly the coordinates that were requested.
    pub fn shortest(v: f64) -> JsonValue {
        if v.is_finite() {
            JsonValue::Num(format!("{v}"))
        } else {
            JsonValue::Null
        }
    }

    pub fn str(v: impl Into<String>) -> JsonValue {
        JsonValue::Str(v.into())
    }

    pub fn write(&self, out: &mut String) {
        match self {
            JsonValue::Null => out.push_str("null"),
            JsonValue::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            JsonValue::Num(n) => out.push_str(n),
            JsonValue::Str(s) => write_escaped(s, out),
            JsonValue::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            JsonValue::Obj(pairs) => {
                out.push('{');
                for (i, (k, v)) in pairs.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_escaped(k, out);
                    out.push(':');
                    v.write(out);
                }
                out.push('}');
            }
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }
}

fn write_escaped(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// The fixed record schema, in order.
pub const RECORD_FIELDS: [&str; 12] = [
    "id",
    "point",
    "lhs",
    "rhs",
    "abs_err",
    "rel_err",
    "tol",
    "pass",
    "convention",
    "sigma",
    "lhs_quad_err",
    "rhs_quad_err",
];

fn record_json(r: &VerificationRecord) -> JsonValue {
    JsonValue::Obj(vec![
        ("id".into(), JsonValue::str(r.id.as_str())),
        ("point".into(), JsonValue::shortest(r.point)),
        ("lhs".into(), JsonValue::number(r.lhs)),
        ("rhs".into(), JsonValue::number(r.rhs)),
        ("abs_err".into(), JsonValue::number(r.abs_err)),
        ("rel_err".into(), JsonValue::number(r.rel_err)),
        ("tol".into(), JsonValue::number(r.tol)),
        ("pass".into(), JsonValue::Bool(r.pass)),
        ("convention".into(), JsonValue::str(r.convention.as_str())),
        ("sigma".into(), JsonValue::int(r.sigma as i64)),
        ("lhs_quad_err".into(), JsonValue::number(r.lhs_quad_err)),
        ("rhs_quad_err".into(), JsonValue::number(r.rhs_quad_err)),
    ])
}

/// Full JSON report: `{"meta": {...}, "records": [...]}`.
pub fn write_json(meta: &[(String, JsonValue)], records: &[VerificationRecord]) -> String {
    let doc = JsonValue::Obj(vec![
        ("meta".into(), JsonValue::Obj(meta.to_vec())),
        (
            "records".into(),
            JsonValue::Arr(records.iter().map(record_json).collect()),
        ),
    ]);
    let mut out = doc.to_json_string();
    out.push('\n');
    out
}

fn csv_float(v: f64) -> String {
    if v.is_finite() {
        fmt_float(v)
    } else {
        "NaN".to_string()
    }
}

/// CSV report: `#`-prefixed meta comment lines, a header, one row per record.
pub fn write_csv(meta_lines: &[String], records: &[VerificationRecord]) -> String {
    let mut out = String::new();
    for line in meta_lines {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&RECORD_FIELDS.join(","));
    out.push('\n');
    for r in records {
        let row = [
            r.id.as_str().to_string(),
            format!("{}", r.point),
            csv_float(r.lhs),
            csv_float(r.rhs),
            csv_float(r.abs_err),
            csv_float(r.rel_err),
            csv_float(r.tol),
            r.pass.to_string(),
            r.convention.as_str().to_string(),
            r.sigma.to_string(),
            csv_float(r.lhs_quad_err),
            csv_float(r.rhs_quad_err),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Per-identity roll-up lines for terminal summaries.
pub fn summary_lines(records: &[VerificationRecord]) -> Vec<String> {
    let mut lines = Vec::new();
    for id in IdentityId::ALL {
        let group: Vec<&VerificationRecord> =
            records.iter().filter(|r| r.id == id).collect();
        if group.is_empty() {
            continue;
        }
        let passed = group.iter().filter(|r| r.pass).count();
        let worst = group
            .iter()
            .map(|r| r.rel_err)
            .filter(|e| e.is_finite())
            .fold(0.0f64, f64::max);
        let status = if passed == group.len() { "pass" } else { "FAIL" };
        lines.push(format!(
            "{:>7}  {}  {}/{} points  worst rel err {:.3e}",
            id.as_str(),
            status,
            passed,
            group.len(),
            worst
        ));
    }
    lines
}

//! JSON documents with fixed float formatting.
//!
//! Every float is written in scientific notation with 17 significant digits,
//! so a reader recovers the exact double. Non-finite values become `null`.

use std::io::{self, Write};

use reczeros::geometry::{ArcGeometry, IsolatedCandidate, Junction};
use reczeros::verify::{Detail, ScanSummary, VerificationReport};
use reczeros::{Complex64, CriticalScalars, LimitSet, RecurrenceParams, RootSet};
use rug::Float;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Map, Value};

/// Pretty printer that writes every float as `{:.16e}`.
pub struct SciFormatter<'a>(PrettyFormatter<'a>);

impl Default for SciFormatter<'_> {
    fn default() -> Self {
        Self(PrettyFormatter::with_indent(b"  "))
    }
}

impl Formatter for SciFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", sci(value))
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Scientific notation, 17 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes `value` with [`SciFormatter`] and a trailing newline.
pub fn to_string(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter::default());
    serde::Serialize::serialize(value, &mut ser)
        .expect("serializing a Value into memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn complex(z: Complex64) -> Value {
    json!({ "re": num(z.re), "im": num(z.im) })
}

fn float(x: &Float) -> Value {
    num(x.to_f64())
}

fn opt_float(x: &Option<Float>) -> Value {
    x.as_ref().map_or(Value::Null, float)
}

pub fn params(p: &RecurrenceParams) -> Value {
    let [a, b, c, d] = p.as_array();
    json!({ "a": num(a), "b": num(b), "c": num(c), "d": num(d) })
}

pub fn scalars(cs: &CriticalScalars) -> Value {
    json!({
        "precision": cs.precision,
        "x_a": float(&cs.x_a),
        "x_b": float(&cs.x_b),
        "b_at_xa": float(&cs.b_at_xa),
        "delta_delta": float(&cs.delta_delta),
        "x_delta_minus": complex(cs.x_delta_minus.to_c64()),
        "x_delta_plus": complex(cs.x_delta_plus.to_c64()),
        "delta_g": float(&cs.delta_g),
        "f": float(&cs.f),
        "x_g_minus": opt_float(&cs.x_g_minus),
        "x_g_plus": opt_float(&cs.x_g_plus),
        "x_h": opt_float(&cs.x_h),
        "uv_case": serde_json::to_value(cs.uv_case).unwrap_or(Value::Null),
        "u": opt_float(&cs.u),
        "v": opt_float(&cs.v),
    })
}

fn arc(a: &ArcGeometry) -> Value {
    json!({
        "endpoints": a.endpoints.iter().copied().map(complex).collect::<Vec<_>>(),
        "through": num(a.through),
        "through_angle": num(a.through_angle),
        "half_span": num(a.half_span),
    })
}

fn candidate(c: &IsolatedCandidate) -> Value {
    json!({
        "point": complex(c.point),
        "margin": num(c.margin),
        "status": c.status.as_str(),
    })
}

fn junction(j: &Junction) -> Value {
    json!({
        "point": num(j.point),
        "inside_len": num(j.inside_len),
        "outside_len": num(j.outside_len),
    })
}

pub fn limit_set(ls: &LimitSet, junction_info: Option<&Junction>) -> Value {
    use reczeros::LimitKind::*;
    let circle = match ls.kind {
        Arc | Circle | Lollipop => {
            json!({ "center": num(ls.circle_center), "radius": num(ls.circle_radius) })
        }
        Interval => Value::Null,
    };
    let (x_min, x_max, y_min, y_max) = ls.bounds();
    json!({
        "kind": ls.kind.as_str(),
        "circle": circle,
        "arc": ls.arc.as_ref().map_or(Value::Null, arc),
        "interval": ls.interval.map_or(Value::Null, |(lo, hi)| json!([num(lo), num(hi)])),
        "junction": junction_info.map_or(Value::Null, junction),
        "isolated": ls.isolated.iter().copied().map(complex).collect::<Vec<_>>(),
        "candidates": ls.candidates.iter().map(candidate).collect::<Vec<_>>(),
        "bounds": { "x_min": num(x_min), "x_max": num(x_max), "y_min": num(y_min), "y_max": num(y_max) },
    })
}

pub fn classification(
    p: &RecurrenceParams,
    ls: &LimitSet,
    junction_info: Option<&Junction>,
    cs: &CriticalScalars,
    warnings: &[String],
) -> Value {
    let mut out = Map::new();
    out.insert("params".into(), params(p));
    out.insert("sign_case".into(), Value::String(p.sign_case().to_string()));
    if let Value::Object(fields) = limit_set(ls, junction_info) {
        out.extend(fields);
    }
    out.insert("scalars".into(), scalars(cs));
    out.insert("warnings".into(), json!(warnings));
    Value::Object(out)
}

pub fn roots(p: &RecurrenceParams, n: usize, requested_precision: u32, rs: &RootSet) -> Value {
    let rows: Vec<Value> = rs
        .to_c64()
        .into_iter()
        .zip(&rs.is_real)
        .zip(&rs.residuals)
        .map(|((z, &is_real), &residual)| {
            json!({ "re": num(z.re), "im": num(z.im), "is_real": is_real, "residual": num(residual) })
        })
        .collect();
    json!({
        "params": params(p),
        "n": n,
        "precision": requested_precision,
        "working_precision": rs.precision,
        "converged": rs.converged,
        "iterations": rs.iterations,
        "max_residual": num(rs.max_residual()),
        "roots": rows,
    })
}

fn detail(d: &Detail) -> Value {
    let metrics: Map<String, Value> = d
        .metrics
        .iter()
        .map(|(k, &v)| (k.clone(), num(v)))
        .collect();
    json!({
        "n": d.n,
        "label": d.label,
        "passed": d.passed,
        "margin": num(d.margin),
        "metrics": metrics,
    })
}

pub fn report(r: &VerificationReport, precision: u32, warnings: &[String]) -> Value {
    json!({
        "claim": r.claim,
        "params": params(&r.params),
        "horizon": r.horizon,
        "precision": precision,
        "passed": r.passed,
        "outcome": r.outcome.as_str(),
        "worst_margin": num(r.worst_margin),
        "in_scope": r.in_scope,
        "details": r.details.iter().map(detail).collect::<Vec<_>>(),
        "notes": r.notes,
        "warnings": warnings,
    })
}

pub fn scan(s: &ScanSummary, precision: u32) -> Value {
    let mut out = report(&s.to_report(), precision, &[]);
    let points: Vec<Value> = s
        .points
        .iter()
        .map(|p| {
            json!({
                "params": params(&p.params),
                "criterion": p.criterion,
                "first_non_real": p.first_non_real,
                "outcome": p.outcome.as_str(),
            })
        })
        .collect();
    out["scan"] = json!({
        "points": points,
        "agreements": s.agreements,
        "false_negatives": s.false_negatives,
        "inconclusive": s.inconclusive,
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_use_seventeen_digits() {
        let s = to_string(&json!({ "x": 0.1, "y": -2.5e-300, "n": 3 }));
        assert!(s.contains("\"x\": 1.0000000000000001e-1"), "{s}");
        assert!(s.contains("\"y\": -2.5000000000000000e-300"), "{s}");
        assert!(s.contains("\"n\": 3"), "{s}");
    }

    #[test]
    fn non_finite_becomes_null() {
        let s = to_string(&json!({ "x": num(f64::NAN), "y": num(f64::INFINITY) }));
        assert!(
            s.contains("\"x\": null") && s.contains("\"y\": null"),
            "{s}"
        );
    }

    #[test]
    fn round_trips_doubles() {
        for x in [0.1, 1.0 / 3.0, -2.302775637731995, 1e-310, f64::MAX] {
            let back: f64 = sci(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
    }

    #[test]
    fn output_is_valid_json() {
        let v = json!({ "a": [1.5, 2.0, { "b": null }], "c": "text" });
        let parsed: Value = serde_json::from_str(&to_string(&v)).unwrap();
        assert_eq!(parsed, v);
    }
}

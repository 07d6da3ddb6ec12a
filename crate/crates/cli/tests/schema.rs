//! JSON outputs against the schemas in `schemas/`.
//!
//! A full validation runs through Python's `jsonschema` package when it is
//! installed. The structural walk below always runs: it follows `required`,
//! `properties`, `items`, `enum` and `type` through local and cross-file
//! `$ref`s, which covers every keyword the shipped schemas use except
//! `pattern` and the numeric bounds.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn load(name: &str) -> Value {
    let text = std::fs::read_to_string(schema_dir().join(name)).expect("schema file");
    serde_json::from_str(&text).expect("schema is JSON")
}

fn resolve<'a>(
    reference: &str,
    current: &'a Value,
    cache: &'a [(String, Value)],
) -> (&'a Value, &'a Value) {
    let (file, pointer) = reference.split_once('#').unwrap_or((reference, ""));
    let doc = if file.is_empty() {
        current
    } else {
        &cache
            .iter()
            .find(|(n, _)| n == file)
            .expect("referenced schema loaded")
            .1
    };
    (doc.pointer(pointer).expect("reference resolves"), doc)
}

fn type_matches(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => v.is_i64() || v.is_u64(),
        other => panic!("unknown type {other}"),
    }
}

fn check(
    schema: &Value,
    doc: &Value,
    v: &Value,
    cache: &[(String, Value)],
    path: &str,
) -> Result<(), String> {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        let (target, root) = resolve(r, doc, cache);
        return check(target, root, v, cache, path);
    }
    if let Some(options) = schema.get("oneOf").and_then(Value::as_array) {
        let matching = options
            .iter()
            .filter(|s| check(s, doc, v, cache, path).is_ok())
            .count();
        return if matching == 1 {
            Ok(())
        } else {
            Err(format!("{path}: {matching} oneOf branches match"))
        };
    }
    if let Some(t) = schema.get("type") {
        let ok = match t {
            Value::String(s) => type_matches(s, v),
            Value::Array(ts) => ts.iter().any(|t| type_matches(t.as_str().unwrap(), v)),
            _ => true,
        };
        if !ok {
            return Err(format!("{path}: {v} is not {t}"));
        }
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(v) {
            return Err(format!("{path}: {v} not in {options:?}"));
        }
    }
    if let Some(obj) = v.as_object() {
        for key in schema
            .get("required")
            .and_then(Value::as_array)
            .into_iter()
            .flatten()
        {
            if !obj.contains_key(key.as_str().unwrap()) {
                return Err(format!("{path}: missing {key}"));
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        for (key, value) in obj {
            let sub = props.and_then(|p| p.get(key));
            match (sub, schema.get("additionalProperties")) {
                (Some(s), _) => check(s, doc, value, cache, &format!("{path}/{key}"))?,
                (None, Some(Value::Bool(false))) => {
                    return Err(format!("{path}: unexpected key {key}"))
                }
                (None, Some(extra @ Value::Object(_))) => {
                    check(extra, doc, value, cache, &format!("{path}/{key}"))?
                }
                _ => {}
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), v.as_array()) {
        for (i, item) in arr.iter().enumerate() {
            check(items, doc, item, cache, &format!("{path}/{i}"))?;
        }
    }
    Ok(())
}

fn output(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_reczeros"))
        .args(args)
        .output()
        .expect("binary runs");
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"))
}

fn cases() -> Vec<(&'static str, Value)> {
    vec![
        (
            "classify.schema.json",
            output(&["classify", "--params", "1,2,-2,-1"]),
        ),
        (
            "classify.schema.json",
            output(&["classify", "--params", "1,0,1,2"]),
        ),
        (
            "classify.schema.json",
            output(&["classify", "--params", "0.5,1,1,1"]),
        ),
        (
            "classify.schema.json",
            output(&["classify", "--params", "1,-1,2,-3"]),
        ),
        (
            "roots.schema.json",
            output(&[
                "roots", "--params", "1,0,1,2", "--n", "9", "--format", "json",
            ]),
        ),
        (
            "report.schema.json",
            output(&["verify", "interlace", "--N", "6"]),
        ),
        (
            "report.schema.json",
            output(&["verify", "lollipop", "--params", "1,2,-2,-1"]),
        ),
        (
            "report.schema.json",
            output(&["verify", "real-rooted", "--params", "1,-2,1,-1", "--N", "2"]),
        ),
        (
            "report.schema.json",
            output(&["verify", "scan", "--N", "3", "--precision", "128"]),
        ),
    ]
}

#[test]
fn outputs_match_schemas_structurally() {
    let cache: Vec<(String, Value)> = [
        "common.schema.json",
        "classify.schema.json",
        "roots.schema.json",
        "report.schema.json",
    ]
    .into_iter()
    .map(|n| (n.to_string(), load(n)))
    .collect();
    for (name, value) in cases() {
        let schema = &cache.iter().find(|(n, _)| n == name).unwrap().1;
        if let Err(e) = check(schema, schema, &value, &cache, "") {
            panic!("{name}: {e}");
        }
    }
}

#[test]
fn structural_check_rejects_broken_documents() {
    let cache: Vec<(String, Value)> = ["common.schema.json", "roots.schema.json"]
        .into_iter()
        .map(|n| (n.to_string(), load(n)))
        .collect();
    let schema = &cache[1].1;
    let mut doc = output(&["roots", "--n", "3", "--format", "json"]);
    assert!(check(schema, schema, &doc, &cache, "").is_ok());
    doc["roots"][0]["is_real"] = Value::String("yes".into());
    assert!(check(schema, schema, &doc, &cache, "").is_err());
    doc.as_object_mut().unwrap().remove("converged");
    assert!(check(schema, schema, &doc, &cache, "").is_err());
}

const PYTHON_VALIDATOR: &str = r#"
import json, pathlib, sys
import jsonschema
from referencing import Registry, Resource
root = pathlib.Path(sys.argv[1])
schemas = {p.name: json.loads(p.read_text()) for p in root.glob("*.schema.json")}
registry = Registry().with_resources(
    [(s["$id"], Resource.from_contents(s)) for s in schemas.values()]
)
for s in schemas.values():
    jsonschema.Draft202012Validator.check_schema(s)
for line in sys.stdin:
    name, doc = line.split("\t", 1)
    jsonschema.Draft202012Validator(schemas[name], registry=registry).validate(json.loads(doc))
print("validated")
"#;

#[test]
fn outputs_validate_with_jsonschema() {
    let probe = Command::new("python3")
        .args(["-c", "import jsonschema, referencing"])
        .output();
    if !matches!(probe, Ok(ref o) if o.status.success()) {
        eprintln!("python3 with jsonschema not available; full validation skipped");
        return;
    }
    let input: String = cases()
        .into_iter()
        .map(|(name, v)| format!("{name}\t{}\n", serde_json::to_string(&v).unwrap()))
        .collect();
    let mut child = Command::new("python3")
        .args(["-c", PYTHON_VALIDATOR, schema_dir().to_str().unwrap()])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .expect("python3 starts");
    use std::io::Write;
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(
        out.status.success(),
        "jsonschema validation failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

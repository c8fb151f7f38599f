//! Shared helpers for the integration-test targets: invoking the compiled
//! `hodge-sigma` binary, locating fixtures and golden outputs, and validating
//! JSON values against the schemas shipped in `schemas/`.
//!
//! The schema validator implements exactly the subset of JSON Schema the
//! shipped schemas use — `type` (name or list of names), `properties`,
//! `required`, `additionalProperties: false`, a single `items` schema,
//! `enum`, and `minimum` — so the tests stay dependency-free.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

/// Outcome of one binary invocation.
pub struct CliRun {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

impl CliRun {
    pub fn stdout_str(&self) -> String {
        String::from_utf8_lossy(&self.stdout).into_owned()
    }

    pub fn stderr_str(&self) -> String {
        String::from_utf8_lossy(&self.stderr).into_owned()
    }

    pub fn stdout_json(&self) -> Value {
        serde_json::from_slice(&self.stdout).unwrap_or_else(|e| {
            panic!("stdout is not JSON ({e}): {}", self.stdout_str());
        })
    }

    pub fn stderr_json(&self) -> Value {
        serde_json::from_slice(&self.stderr).unwrap_or_else(|e| {
            panic!("stderr is not JSON ({e}): {}", self.stderr_str());
        })
    }
}

/// Path of the compiled binary under test.
pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_hodge-sigma")
}

/// Runs the binary with a clean tolerance environment.
pub fn run(args: &[&str]) -> CliRun {
    run_with_env(args, &[])
}

/// Runs the binary with the given extra environment variables. The ambient
/// `HODGE_SIGMA_TOL` is always stripped first so the surrounding shell cannot
/// skew golden comparisons.
pub fn run_with_env(args: &[&str], env: &[(&str, &str)]) -> CliRun {
    let mut cmd = Command::new(bin());
    cmd.args(args).env_remove("HODGE_SIGMA_TOL");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary failed to launch");
    CliRun {
        code: out.status.code().expect("binary was killed by a signal"),
        stdout: out.stdout,
        stderr: out.stderr,
    }
}

fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

/// Absolute path of a test fixture.
pub fn fixture(name: &str) -> PathBuf {
    manifest_dir().join("tests/fixtures").join(name)
}

/// Bytes of a frozen golden output.
pub fn golden(name: &str) -> Vec<u8> {
    let path = manifest_dir().join("tests/golden").join(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("missing golden {}: {e}", path.display()))
}

/// A schema from the repository-level `schemas/` directory, parsed.
pub fn schema(name: &str) -> Value {
    let path = manifest_dir().join("../../schemas").join(name);
    let bytes =
        std::fs::read(&path).unwrap_or_else(|e| panic!("missing schema {}: {e}", path.display()));
    serde_json::from_slice(&bytes).unwrap_or_else(|e| panic!("schema {name} is not JSON: {e}"))
}

/// Panics with a readable message when `value` violates the named schema.
pub fn assert_schema(value: &Value, schema_name: &str) {
    if let Err(e) = validate(value, &schema(schema_name)) {
        panic!("schema {schema_name} violated: {e}\nvalue: {value}");
    }
}

/// Validates `value` against the supported JSON Schema subset.
pub fn validate(value: &Value, schema: &Value) -> Result<(), String> {
    validate_at(value, schema, "$")
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

fn matches_type(v: &Value, want: &str) -> bool {
    match want {
        // JSON Schema counts any mathematically integral number as an
        // integer; our writers only emit integral fields without a fraction,
        // so i64/u64 representability is the right test.
        "integer" => v.as_i64().is_some() || v.as_u64().is_some(),
        "number" => v.is_number(),
        other => type_name(v) == other,
    }
}

fn validate_at(value: &Value, schema: &Value, path: &str) -> Result<(), String> {
    let rules = schema
        .as_object()
        .ok_or_else(|| format!("{path}: schema node is not an object"))?;

    if let Some(want) = rules.get("type") {
        let ok = match want {
            Value::String(name) => matches_type(value, name),
            Value::Array(names) => names
                .iter()
                .filter_map(Value::as_str)
                .any(|name| matches_type(value, name)),
            _ => return Err(format!("{path}: malformed type clause {want}")),
        };
        if !ok {
            return Err(format!(
                "{path}: expected type {want}, found {}",
                type_name(value)
            ));
        }
    }

    if let Some(allowed) = rules.get("enum").and_then(Value::as_array) {
        if !allowed.contains(value) {
            return Err(format!("{path}: value {value} not in enum {allowed:?}"));
        }
    }

    if let Some(min) = rules.get("minimum").and_then(Value::as_f64) {
        if let Some(x) = value.as_f64() {
            if x < min {
                return Err(format!("{path}: value {x} below minimum {min}"));
            }
        }
    }

    if let Some(map) = value.as_object() {
        let props = rules.get("properties").and_then(Value::as_object);
        if let Some(props) = props {
            for (key, sub) in props {
                if let Some(v) = map.get(key) {
                    validate_at(v, sub, &format!("{path}.{key}"))?;
                }
            }
        }
        if rules.get("additionalProperties") == Some(&Value::Bool(false)) {
            for key in map.keys() {
                if props.is_none_or(|p| !p.contains_key(key)) {
                    return Err(format!("{path}: unexpected key {key:?}"));
                }
            }
        }
        if let Some(required) = rules.get("required").and_then(Value::as_array) {
            for key in required.iter().filter_map(Value::as_str) {
                if !map.contains_key(key) {
                    return Err(format!("{path}: missing required key {key:?}"));
                }
            }
        }
    }

    if let Some(items) = rules.get("items") {
        if let Some(arr) = value.as_array() {
            for (i, v) in arr.iter().enumerate() {
                validate_at(v, items, &format!("{path}[{i}]"))?;
            }
        }
    }

    Ok(())
}

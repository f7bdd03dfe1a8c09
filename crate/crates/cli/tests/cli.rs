use std::process::{Command, Output};

use tempfile::TempDir;

fn tw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tw")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_simplicial_writes_a_report() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("out.json");
    let o = tw(&["verify", "simplicial", "--kmax", "3", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["suite"], "simplicial");
    let checks = v["checks"].as_array().unwrap();
    for family in ["dd", "ds", "ss", "cof"] {
        assert!(checks.iter().any(|c| c["id"].as_str().unwrap().contains(&format!("/{family}/"))), "{family}");
    }
    assert!(checks.iter().any(|c| c["id"].as_str().unwrap().ends_with("ss/triple-join")));
    assert!(checks.iter().all(|c| c["status"] == "pass"));
}

#[test]
fn reports_are_byte_identical_for_a_seed() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str, seed: &str| {
        let p = dir.path().join(name);
        let o = tw(&["verify", "contraction", "--nmax", "3", "--kmax", "1", "--seed", seed, "--json", p.to_str().unwrap(), "-q"]);
        assert!(o.status.success());
        std::fs::read(p).unwrap()
    };
    assert_eq!(run("a.json", "5"), run("b.json", "5"));
    assert_ne!(run("c.json", "5"), run("d.json", "6"));
}

#[test]
fn enumerate_counts_bracketings() {
    let o = tw(&["enumerate", "[0]^3", "[0]", "--k", "0", "--max-gens", "6"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("2 classes"));
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn normalize_applies_the_slide() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("lhs.dsl");
    std::fs::write(&p, "k=1; src=0; u(1) (0); t(1,0)\n").unwrap();
    let o = tw(&["normalize", p.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "k=1\nsrc=0\n(0) u(1)\ntgt=0 1\n");
}

#[test]
fn render_formats() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("id.dsl");
    std::fs::write(&p, "k=0; src=0").unwrap();
    let o = tw(&["render", p.to_str().unwrap()]);
    assert_eq!(stdout(&o), "k=0\n0\n");
    let o = tw(&["render", p.to_str().unwrap(), "--format", "svg"]);
    assert!(stdout(&o).starts_with("<svg"));
    assert_eq!(stdout(&o).matches("<line").count(), 1);
}

#[test]
fn constructions_print_parseable_dsl() {
    for args in [&["beta", "3"][..], &["theta", "2", "2"], &["tau", "4"]] {
        let o = tw(args);
        assert!(o.status.success());
        looks_like_dsl(&stdout(&o));
    }
    assert_eq!(tw(&["beta", "1"]).status.code(), Some(2));
}

fn looks_like_dsl(text: &str) {
    assert!(text.starts_with("k="));
    assert!(text.lines().any(|l| l.starts_with("tgt=")));
}

#[test]
fn exit_codes() {
    assert_eq!(tw(&[]).status.code(), Some(2));
    assert_eq!(tw(&["verify", "nothing"]).status.code(), Some(2));
    assert_eq!(tw(&["--help"]).status.code(), Some(0));
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.dsl");
    std::fs::write(&bad, "k=0; src=0; t(0,0)").unwrap();
    let o = tw(&["normalize", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cross requires a > b"));
    assert_eq!(tw(&["render", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn failing_checks_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("reversed.toml");
    std::fs::write(&p, "kind = \"free-module\"\nmodulus = 2\nbase_size = 1\nconvention = \"reversed\"\n").unwrap();
    let o = tw(&["verify", "twist", "--backend", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL cobar/juxtaposition"));
    std::fs::write(&p, "kind = \"free-module\"\nmodulus = 2\nbase_size = 1\n").unwrap();
    assert_eq!(tw(&["verify", "twist", "--backend", p.to_str().unwrap(), "-q"]).status.code(), Some(0));
    std::fs::write(&p, "kind = \"algebra\"\np = 2\n").unwrap();
    assert_eq!(tw(&["verify", "twist", "--backend", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn backend_file_drives_naturality() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("f3.toml");
    std::fs::write(&p, "kind = \"algebra\"\nname = \"F3 x F3\"\np = 3\ndim = 2\nstructure = [1, 0, 0, 0, 0, 0, 0, 1]\n").unwrap();
    let o = tw(&["verify", "naturality", "--kmax", "1", "--backend", p.to_str().unwrap(), "-q"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

/// Enough of JSON Schema for the report schema: type, enum, required,
/// properties, additionalProperties, items, minimum.
fn conforms(schema: &serde_json::Value, v: &serde_json::Value, path: &str) -> Result<(), String> {
    use serde_json::Value;
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(v) {
            return Err(format!("{path}: {v} not in {options:?}"));
        }
    }
    if let Some(t) = schema.get("type").and_then(Value::as_str) {
        let ok = match t {
            "object" => v.is_object(),
            "array" => v.is_array(),
            "string" => v.is_string(),
            "integer" => v.is_u64() || v.is_i64(),
            other => return Err(format!("unsupported type {other}")),
        };
        if !ok {
            return Err(format!("{path}: expected {t}, got {v}"));
        }
    }
    if let Some(min) = schema.get("minimum").and_then(Value::as_i64) {
        if v.as_i64().is_some_and(|x| x < min) {
            return Err(format!("{path}: below {min}"));
        }
    }
    if let Some(obj) = v.as_object() {
        for r in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            if !obj.contains_key(r.as_str().unwrap()) {
                return Err(format!("{path}: missing {r}"));
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        for (k, x) in obj {
            match (props.and_then(|p| p.get(k)), schema.get("additionalProperties")) {
                (Some(s), _) => conforms(s, x, &format!("{path}.{k}"))?,
                (None, Some(Value::Bool(false))) => return Err(format!("{path}: unexpected key {k}")),
                (None, Some(s)) if s.is_object() => conforms(s, x, &format!("{path}.{k}"))?,
                _ => {}
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), v.as_array()) {
        for (i, x) in arr.iter().enumerate() {
            conforms(items, x, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

#[test]
fn reports_match_the_documented_schema() {
    let schema: serde_json::Value =
        serde_json::from_str(include_str!("../../../docs/report.schema.json")).unwrap();
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("reversed.toml");
    std::fs::write(&p, "kind = \"free-module\"\nmodulus = 2\nbase_size = 1\nconvention = \"reversed\"\n").unwrap();
    let runs: [&[&str]; 5] = [
        &["verify", "simplicial", "--kmax", "1", "--samples", "20"],
        &["verify", "contraction", "--nmax", "2", "--kmax", "1", "--samples", "10"],
        &["verify", "twist", "--samples", "50"],
        &["verify", "twist", "--backend", p.to_str().unwrap()],
        &["verify", "naturality", "--kmax", "1"],
    ];
    let mut saw_counterexample = false;
    for (i, args) in runs.iter().enumerate() {
        let out = dir.path().join(format!("r{i}.json"));
        let mut full = args.to_vec();
        full.extend(["--json", out.to_str().unwrap(), "-q"]);
        tw(&full);
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        conforms(&schema, &v, "$").unwrap_or_else(|e| panic!("{args:?}: {e}"));
        saw_counterexample |= v["checks"].as_array().unwrap().iter().any(|c| c.get("counterexample").is_some());
        // every id has exactly one anchor
        let checks = v["checks"].as_array().unwrap();
        let mut ids: Vec<&str> = checks.iter().map(|c| c["id"].as_str().unwrap()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), checks.len());
    }
    assert!(saw_counterexample);
}

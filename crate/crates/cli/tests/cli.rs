use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&str>) -> (Value, i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_localh"))
        .args(args)
        .env_remove("LOCALH_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child
            .stdin
            .take()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    } else {
        drop(child.stdin.take());
    }
    let out = child.wait_with_output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&text).unwrap_or(Value::Null);
    (value, out.status.code().unwrap(), text)
}

fn ints(v: &Value) -> Vec<i64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_i64().unwrap())
        .collect()
}

#[test]
fn validate_builtins() {
    for name in ["builtin:triforce", "builtin:trivial-3"] {
        let (v, code, _) = run(&["validate", name], None);
        assert_eq!(code, 0);
        assert_eq!(v["passed"], true);
    }
}

#[test]
fn triforce_without_central_facet_fails_homology() {
    let (mut file, _, _) = run(&["corpus", "triforce"], None);
    let facets = file["facets"].as_array_mut().unwrap();
    facets.retain(|f| {
        let mut labels: Vec<&str> = f
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_str().unwrap())
            .collect();
        labels.sort();
        labels != ["a", "b", "c"]
    });
    let (v, code, _) = run(&["validate", "-"], Some(&file.to_string()));
    assert_eq!(code, 2);
    assert_eq!(v["checks"]["homology"]["passed"], false);
    let first = &v["checks"]["homology"]["violations"][0];
    assert_eq!(ints(&first["betti"]), vec![0, 1, 0]);
}

#[test]
fn schema_errors_exit_one() {
    let (v, code, _) = run(&["validate", "-"], Some(r#"{"name":"x","facets":[]}"#));
    assert_eq!(code, 1);
    assert_eq!(v["error"], "schema");
    let (_, code, _) = run(&["validate", "builtin:no-such-thing"], None);
    assert_eq!(code, 1);
    let (_, code, _) = run(&["local-h", "builtin:triforce", "--field", "fp:4"], None);
    assert_eq!(code, 1);
}

#[test]
fn carrier_map_failure_exits_two() {
    let text = r#"{"name":"bad","simplex_vertices":["u","v"],
        "vertices":[{"id":"u","carrier":["u"]},{"id":"x","carrier":["u"]}],
        "facets":[["u","x"]]}"#;
    let (v, code, _) = run(&["validate", "-"], Some(text));
    assert_eq!(code, 2);
    assert_eq!(v["checks"]["carrier_map"]["passed"], false);
}

#[test]
fn local_h_examples() {
    let (v, code, _) = run(&["local-h", "builtin:triforce"], None);
    assert_eq!(code, 0);
    assert_eq!(ints(&v["ell"]), vec![0, 0, 0, 0]);
    assert_eq!(v["agreement"], true);
    let (v, _, _) = run(
        &[
            "local-h",
            "builtin:triforce",
            "--face",
            "c",
            "--method",
            "module",
        ],
        None,
    );
    assert_eq!(ints(&v["ell"]), vec![0, 1, 0]);
    assert!(v.get("agreement").is_none());
    let (v, _, _) = run(
        &["local-h", "builtin:trivial-3", "--method", "incexc"],
        None,
    );
    assert_eq!(ints(&v["ell"]), vec![0, 0, 0, 0]);
    let (v, code, _) = run(&["local-h", "builtin:triforce", "--face", "u,a"], None);
    assert_eq!(code, 1, "{v}");
}

#[test]
fn resolution_report_is_exact() {
    let (v, code, _) = run(
        &["resolution", "builtin:triforce", "--face", "c", "--verify"],
        None,
    );
    assert_eq!(code, 0);
    assert_eq!(v["exactness"]["passed"], true);
    assert_eq!(v["terms"][1], serde_json::json!([[1], [2]]));
    assert_eq!(v["degrees"].as_array().unwrap().len(), 5);
    for deg in v["degrees"].as_array().unwrap() {
        for d in deg["differentials"].as_array().unwrap() {
            for entry in d["entries"].as_array().unwrap() {
                assert!(entry[2].is_i64(), "coefficients are integers: {entry}");
            }
        }
    }
}

#[test]
fn map_precondition_and_success() {
    let (v, code, _) = run(
        &["map", "builtin:triforce", "--to", "c", "--check-surjective"],
        None,
    );
    assert_eq!(code, 2);
    assert_eq!(ints(&v["monotonicity"]["source_ell"]), vec![0, 0, 0, 0]);
    assert_eq!(ints(&v["monotonicity"]["target_ell"]), vec![0, 1, 0]);
    let (v, code, _) = run(
        &[
            "map",
            "builtin:triforce",
            "--face",
            "a",
            "--to",
            "a,w",
            "--check-surjective",
        ],
        None,
    );
    assert_eq!(code, 0);
    assert_eq!(v["monotonicity"]["passed"], true);
    let (v, code, _) = run(
        &[
            "map",
            "builtin:triforce",
            "--face",
            "c",
            "--to",
            "a,c",
            "--check-compose",
            "a,b,c",
        ],
        None,
    );
    assert_eq!(code, 0);
    assert_eq!(v["composition"]["passed"], true);
}

#[test]
fn audit_reports_verdicts() {
    let (v, code, _) = run(&["audit", "builtin:triforce"], None);
    assert_eq!(code, 0);
    assert_eq!(v["analysis"]["verdict"], "vanishing");
    let (v, _, _) = run(&["audit", "builtin:triforce", "--face", "c"], None);
    assert_eq!(v["analysis"]["verdict"], "nonvanishing");
}

#[test]
fn restrict_full_link_equals_local_h() {
    let (r, code, _) = run(&["restrict", "builtin:triforce", "--face", "c"], None);
    assert_eq!(code, 0);
    let (l, _, _) = run(&["local-h", "builtin:triforce", "--face", "c"], None);
    assert_eq!(r["dims"], l["dims"]);
    let (r, _, _) = run(
        &[
            "restrict",
            "builtin:triforce",
            "--face",
            "c",
            "--delta",
            "a,b",
        ],
        None,
    );
    assert_eq!(ints(&r["dims"])[1], 1);
}

#[test]
fn standalone_fixtures() {
    let (v, code, _) = run(
        &[
            "restrict",
            "builtin:six-vertex-split-face",
            "--max-degree",
            "6",
        ],
        None,
    );
    assert_eq!(code, 0);
    assert_eq!(v["zero"], true);
    let (v, _, _) = run(
        &[
            "restrict",
            "builtin:six-vertex-corner-facet",
            "--max-degree",
            "6",
        ],
        None,
    );
    assert!(ints(&v["dims"])[3] >= 1);
}

#[test]
fn corpus_listing_and_text_output() {
    let (v, code, _) = run(&["corpus"], None);
    assert_eq!(code, 0);
    assert!(v["triangulations"].as_array().unwrap().len() >= 10);
    let (v, _, _) = run(&["corpus", "stellar-interior-2simplex"], None);
    assert_eq!(ints(&v["local_h"][0]["ell"]), vec![0, 1, 1, 0]);
    let (_, code, text) = run(&["local-h", "builtin:triforce", "--format", "text"], None);
    assert_eq!(code, 0);
    assert!(text.contains("ell: [0,0,0,0]"), "{text}");
}

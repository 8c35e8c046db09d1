use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn gk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = gk(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn code(args: &[&str]) -> i32 {
    gk(args).status.code().expect("exit code")
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn validate(schema: &str, v: &Value) {
    let path = schema_dir().join(format!("{schema}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let json: Value = serde_json::from_str(&text).expect("schema is JSON");
    let validator = jsonschema::validator_for(&json).expect("valid schema");
    let errors: Vec<String> = validator.iter_errors(v).map(|e| e.to_string()).collect();
    let shown: String = v.to_string().chars().take(400).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}\n{shown}");
}

fn word_file() -> PathBuf {
    let p = std::env::temp_dir().join(format!("gk-cli-word-{}.json", std::process::id()));
    std::fs::write(&p, r#"[{"z":[1,0]},{"q":"1/3"},{"z":[-1,0]}]"#).unwrap();
    p
}

#[test]
fn factor_and_expand() {
    let v = ok_json(&["factor", "--k", "12"]);
    assert_eq!(v["full_divisors"], serde_json::json!([1, 3, 4, 12]));
    assert_eq!(v["n"], 2);
    for k in ["6", "10", "12"] {
        let v = ok_json(&["expand", "--k", k, "--value", &format!("1/{k}")]);
        assert_eq!(v["expansion"], "0.1");
        let v = ok_json(&["expand", "--k", k, "--digits", "10.1001"]);
        let kk: i64 = k.parse().unwrap();
        let den = kk.pow(4);
        let num = kk * den + kk.pow(3) + 1;
        let g = num_gcd(num, den);
        assert_eq!(v["value"], format!("{}/{}", num / g, den / g));
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

#[test]
fn group_operations() {
    let v = ok_json(&["mul", "--k", "6", "t1", "a"]);
    assert_eq!(v, serde_json::json!({"r": "2", "z": [1, 0]}));
    let g = r#"{"r":"5/6","z":[1,-2]}"#;
    let inv = ok_json(&["inv", "--k", "6", g]);
    let back = ok_json(&["mul", "--k", "6", g, &inv.to_string()]);
    assert_eq!(back, serde_json::json!({"r": "0", "z": [0, 0]}));
}

#[test]
fn confining_check_examples() {
    let v = ok_json(&[
        "confining",
        "check",
        "--k",
        "6",
        "--subset",
        "Qminus",
        "--character",
        "minus",
        "--num",
        "200",
        "--exp",
        "2",
        "--z-box",
        "3",
        "--samples",
        "50",
    ]);
    assert_eq!(v["confining"], true);
    assert_eq!(v["strictly_confining"], true);
    let v = ok_json(&[
        "confining",
        "check",
        "--k",
        "6",
        "--subset",
        "Q1",
        "--character",
        "plus2",
        "--num",
        "100",
        "--exp",
        "2",
        "--z-box",
        "3",
    ]);
    assert_eq!(v["confining"], false);
    assert_eq!(v["reports"][0]["result"], "fail");
}

#[test]
fn word_oracles_agree() {
    let v = ok_json(&[
        "wordlen",
        "--k",
        "6",
        "--subset",
        "Qminus",
        "--character",
        "minus",
        "--element",
        r#"{"r":"-8/3","z":[0,1]}"#,
    ]);
    assert_eq!(v["tau"]["length"], 2);
    assert_eq!(v["bfs"]["length"], 2);
    assert_eq!(v["agree"], true);
    let w = word_file();
    let v = ok_json(&[
        "normalform",
        "--k",
        "6",
        "--subset",
        "Q1",
        "--character",
        "plus1",
        "--word",
        w.to_str().unwrap(),
    ]);
    assert_eq!(v["value"], serde_json::json!({"r": "2/3", "z": [0, 0]}));
    assert!(v["length"].as_u64().unwrap() <= 3);
}

#[test]
fn tree_examples() {
    let v = ok_json(&[
        "tree",
        "dist",
        "--k",
        "6",
        "--i",
        "1",
        "--u",
        r#"{"x":"0","h":0}"#,
        "--v",
        r#"{"x":"1/2","h":1}"#,
        "--window=-3,3,3",
    ]);
    assert_eq!(v["distance"], 3);
    assert_eq!(v["bfs_distance"], 3);
    let v = ok_json(&["tree", "type", "--k", "12", "--i", "2", "--element", "t2"]);
    assert_eq!(v["type"], "loxodromic");
    assert_eq!(v["translation_length"], 1);
    let v = ok_json(&["tree", "type", "--k", "12", "--i", "2", "--element", "t1"]);
    assert_eq!(v["type"], "elliptic");
    let v = ok_json(&[
        "tree",
        "busemann",
        "--k",
        "6",
        "--i",
        "2",
        "--element",
        r#"{"r":"7/36","z":[3,-2]}"#,
    ]);
    assert_eq!(v["busemann"], -2);
    assert_eq!(v["estimate"], -2);
}

#[test]
fn plane_examples() {
    let v = ok_json(&["plane", "busemann", "--k", "6", "--element", "t2"]);
    let exact: f64 = v["exact"].as_str().unwrap().parse().unwrap();
    assert!((exact + 3f64.ln()).abs() < 1e-12);
    let v = ok_json(&[
        "plane",
        "dist",
        "--k",
        "6",
        "--u",
        r#"{"re":"0","im":"1"}"#,
        "--v",
        r#"{"re":"0","im":"12"}"#,
    ]);
    let d: f64 = v["distance"].as_str().unwrap().parse().unwrap();
    assert!((d - 12f64.ln()).abs() < 1e-12);
    let v = ok_json(&[
        "plane", "smgen", "--k", "6", "--num", "6", "--exp", "1", "--z-box", "1",
    ]);
    assert_eq!(
        v["count"].as_u64().unwrap() as usize,
        v["elements"].as_array().unwrap().len()
    );
}

#[test]
fn poset_and_bns() {
    let v = ok_json(&["poset", "--k", "12"]);
    let qp = v["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|n| n["kind"] == "quasi_parabolic")
        .count();
    assert_eq!(qp, 3);
    let out = gk(&["poset", "--k", "12", "--format", "dot"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    let v = ok_json(&["bns", "--k", "12"]);
    assert_eq!(v["complement"], serde_json::json!([[1, 0], [0, 1]]));
    let v = ok_json(&["bns", "--k", "12", "--character", "linear:1,1"]);
    assert_eq!(v["in_bns"], true);
}

#[test]
fn delta_models() {
    let v = ok_json(&[
        "delta",
        "--k",
        "6",
        "--model",
        "tree",
        "--samples",
        "300",
        "--seed",
        "3",
    ]);
    assert_eq!(v["delta"], 0.0);
    let v = ok_json(&[
        "delta",
        "--k",
        "6",
        "--model",
        "plane",
        "--samples",
        "300",
        "--seed",
        "3",
        "--points",
        "20",
    ]);
    assert!(v["delta"].as_f64().unwrap() <= 2f64.ln() + 1e-9);
}

#[test]
fn exit_codes() {
    // Usage errors.
    assert_eq!(code(&["factor"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(
        code(&[
            "wordlen",
            "--k",
            "6",
            "--subset",
            "Q9",
            "--character",
            "minus",
            "--element",
            "a"
        ]),
        2
    );
    assert_eq!(code(&["mul", "--k", "6", "{not json", "a"]), 2);
    assert_eq!(
        code(&[
            "delta",
            "--k",
            "6",
            "--model",
            "sphere",
            "--samples",
            "1",
            "--seed",
            "0"
        ]),
        2
    );
    // Domain errors.
    assert_eq!(code(&["factor", "--k", "1"]), 3);
    assert_eq!(code(&["expand", "--k", "6", "--value", "1/5"]), 3);
    assert_eq!(
        code(&[
            "plane",
            "dist",
            "--k",
            "6",
            "--u",
            r#"{"re":"0","im":"-1"}"#,
            "--v",
            r#"{"re":"0","im":"1"}"#
        ]),
        3
    );
    assert_eq!(
        code(&[
            "tree",
            "dist",
            "--k",
            "6",
            "--i",
            "1",
            "--u",
            r#"{"x":"1/216","h":0}"#,
            "--v",
            r#"{"x":"0","h":0}"#,
            "--window=-1,1,1"
        ]),
        3
    );
    // Search bounds exhausted.
    assert_eq!(
        code(&[
            "tree",
            "dist",
            "--k",
            "6",
            "--i",
            "1",
            "--u",
            r#"{"x":"0","h":0}"#,
            "--v",
            r#"{"x":"0","h":0}"#,
            "--window=-3,3,40"
        ]),
        4
    );
    let out = gk(&["factor", "--k", "1"]);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert!(out.stdout.is_empty());
}

#[test]
fn output_is_byte_deterministic() {
    let runs: [&[&str]; 4] = [
        &[
            "confining",
            "check",
            "--k",
            "12",
            "--subset",
            "Q2",
            "--character",
            "plus2",
            "--num",
            "50",
            "--exp",
            "2",
        ],
        &[
            "delta",
            "--k",
            "6",
            "--model",
            "plane",
            "--samples",
            "200",
            "--seed",
            "7",
            "--points",
            "16",
        ],
        &[
            "plane",
            "density",
            "--k",
            "6",
            "--samples",
            "5",
            "--seed",
            "2",
            "--exp",
            "2",
            "--z-box",
            "2",
        ],
        &["poset", "--k", "30", "--format", "dot"],
    ];
    for args in runs {
        let a = gk(args);
        let b = gk(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn outputs_match_schemas() {
    let w = word_file();
    let w = w.to_str().unwrap();
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("factor", vec!["factor", "--k", "30"]),
        ("expand", vec!["expand", "--k", "12", "--value", "-145/12"]),
        ("expand", vec!["expand", "--k", "6", "--digits", "-10.1001"]),
        ("element", vec!["mul", "--k", "6", "a", "t2"]),
        (
            "element",
            vec!["inv", "--k", "6", r#"{"r":"1/2","z":[1,-1]}"#],
        ),
        (
            "confining",
            vec![
                "confining",
                "check",
                "--k",
                "6",
                "--subset",
                "Q1",
                "--character",
                "plus2",
                "--num",
                "50",
                "--exp",
                "2",
            ],
        ),
        (
            "confining",
            vec![
                "confining",
                "check",
                "--k",
                "6",
                "--subset",
                "Qminus",
                "--character",
                "minus",
                "--num",
                "50",
                "--exp",
                "2",
            ],
        ),
        (
            "wordlen",
            vec![
                "wordlen",
                "--k",
                "6",
                "--subset",
                "Qminus",
                "--character",
                "minus",
                "--element",
                r#"{"r":"2","z":[0,0]}"#,
            ],
        ),
        (
            "wordlen",
            vec![
                "wordlen",
                "--k",
                "6",
                "--subset",
                "Q1",
                "--character",
                "plus1",
                "--element",
                "a",
                "--oracle",
                "tau",
            ],
        ),
        (
            "normalform",
            vec![
                "normalform",
                "--k",
                "6",
                "--subset",
                "Q1",
                "--character",
                "plus1",
                "--word",
                w,
            ],
        ),
        (
            "tree_act",
            vec![
                "tree",
                "act",
                "--k",
                "6",
                "--i",
                "1",
                "--element",
                "a",
                "--vertex",
                r#"{"x":"0","h":0}"#,
            ],
        ),
        (
            "tree_dist",
            vec![
                "tree",
                "dist",
                "--k",
                "6",
                "--i",
                "2",
                "--u",
                r#"{"x":"0","h":0}"#,
                "--v",
                r#"{"x":"1/3","h":2}"#,
            ],
        ),
        (
            "tree_busemann",
            vec![
                "tree",
                "busemann",
                "--k",
                "6",
                "--i",
                "1",
                "--element",
                "t1",
            ],
        ),
        (
            "tree_type",
            vec!["tree", "type", "--k", "6", "--i", "1", "--element", "a"],
        ),
        (
            "plane_act",
            vec![
                "plane",
                "act",
                "--k",
                "6",
                "--element",
                "t1",
                "--point",
                r#"{"re":"0.5","im":"1"}"#,
            ],
        ),
        (
            "plane_dist",
            vec![
                "plane",
                "dist",
                "--k",
                "6",
                "--u",
                r#"{"re":"0","im":"1"}"#,
                "--v",
                r#"{"re":"1","im":"1"}"#,
            ],
        ),
        (
            "plane_busemann",
            vec![
                "plane",
                "busemann",
                "--k",
                "6",
                "--element",
                r#"{"r":"-3","z":[-1,2]}"#,
            ],
        ),
        (
            "plane_smgen",
            vec!["plane", "smgen", "--k", "6", "--num", "3", "--z-box", "1"],
        ),
        (
            "plane_density",
            vec![
                "plane",
                "density",
                "--k",
                "6",
                "--samples",
                "3",
                "--seed",
                "1",
                "--exp",
                "2",
                "--z-box",
                "2",
            ],
        ),
        ("poset", vec!["poset", "--k", "6"]),
        ("bns", vec!["bns", "--k", "6"]),
        ("bns", vec!["bns", "--k", "6", "--character", "minus"]),
        (
            "delta",
            vec![
                "delta",
                "--k",
                "6",
                "--model",
                "tree",
                "--samples",
                "20",
                "--seed",
                "1",
                "--points",
                "8",
            ],
        ),
    ];
    for (schema, args) in cases {
        let v = ok_json(&args);
        validate(schema, &v);
    }
}

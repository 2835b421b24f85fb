use dmbetti::cli::run;
use serde_json::{json, Value};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn dmbetti(args: &[&str], input: &str) -> Output {
    let mut stdin = input.as_bytes();
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let argv = std::iter::once("dmbetti").chain(args.iter().copied());
    let code = run(argv, &mut stdin, &mut stdout, &mut stderr);
    Output { code, stdout: String::from_utf8(stdout).unwrap(), stderr: String::from_utf8(stderr).unwrap() }
}

fn ok(args: &[&str], input: &str) -> Value {
    let out = dmbetti(args, input);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

const CANCEL: &str = r#"{
  "ring": {"nvars": 2}, "a": 0, "gens": [0, 2, 1, 1, 3, 3, 2, 4],
  "matrix": [
    ["0","0","x1","x2","0","0","0","0"],
    ["0","0","0","0","x1","x2","1","0"],
    ["0","0","0","0","0","0","-x2","0"],
    ["0","0","0","0","0","0","x1","0"],
    ["0","0","0","0","0","0","0","-x2"],
    ["0","0","0","0","0","0","0","x1"],
    ["0","0","0","0","0","0","0","0"],
    ["0","0","0","0","0","0","0","0"]
  ]
}"#;

#[test]
fn decompose_worked_example() {
    let v = ok(&["decompose"], r#"{"0": 3, "1": 4, "2": 2, "3": 5}"#);
    assert_eq!(v["chain"], json!(true));
    assert_eq!(
        v["pairs"],
        json!([
            {"coeff": "2/1", "pair": [0, 1]},
            {"coeff": "1/1", "pair": [0, 3]},
            {"coeff": "2/1", "pair": [1, 3]},
            {"coeff": "2/1", "pair": [2, 3]}
        ])
    );
    // the wrapped form is accepted too
    let w = ok(&["decompose"], r#"{"entries": {"0": "3", "1": "4", "2": "2", "3": "5"}}"#);
    assert_eq!(w, v);
}

#[test]
fn decompose_outside_the_cone() {
    let out = dmbetti(&["decompose"], r#"{"0": 1}"#);
    assert_eq!(out.code, 1);
    assert!(out.stdout.is_empty());
    let err: Value = serde_json::from_str(&out.stderr).unwrap();
    assert_eq!(err["error"], "NotInCone");
    assert_eq!(err["certificate"], json!({"kind": "tau", "j": 0, "value": "-1/1"}));
}

#[test]
fn minimalize_and_betti() {
    let v = ok(&["minimalize"], CANCEL);
    assert_eq!(v["betti"], json!({"entries": {"0": "1/1", "1": "2/1", "3": "2/1", "4": "1/1"}}));
    assert_eq!(v["module"]["gens"].as_array().unwrap().len(), 6);
    let b = ok(&["betti", "--in", CANCEL], "");
    assert_eq!(b, v["betti"]);
    assert_eq!(ok(&["validate"], CANCEL), json!({"valid": true}));
}

#[test]
fn invalid_modules() {
    let bad = r#"{"ring": {"univariate": true}, "a": 1, "gens": [0, 0], "matrix": [["0","t"],["t","0"]]}"#;
    let out = dmbetti(&["validate"], bad);
    assert_eq!(out.code, 1);
    let err: Value = serde_json::from_str(&out.stderr).unwrap();
    assert_eq!(err["error"], "NotSquareZero");
    assert_eq!(err["certificate"], json!({"row": 0, "col": 0}));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(dmbetti(&["bogus"], "").code, 2);
    assert_eq!(dmbetti(&["gamma"], "").code, 2);
    assert_eq!(dmbetti(&["decompose"], "not json").code, 2);
    assert_eq!(dmbetti(&["decompose", "--in", "/nonexistent/input.json"], "").code, 2);
    let help = dmbetti(&["--help"], "");
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("decompose"));
}

#[test]
fn flatten_and_pure() {
    let table = r#"[{"i": 0, "j": 0, "v": "1"}, {"i": 1, "j": 1, "v": "2"}, {"i": 2, "j": 2, "v": "1"}]"#;
    let v = ok(&["flatten", "--a", "0"], table);
    assert_eq!(v["entries"], json!({"0": "1/1", "1": "2/1", "2": "1/1"}));
    let v = ok(&["flatten", "--a", "1"], table);
    assert_eq!(v["entries"], json!({"0": "4/1"}));
    let pure = ok(&["pure", "--n", "2", "--window", "0", "4"], "");
    assert_eq!(pure.as_array().unwrap().len(), 10);
    let supported = ok(&["pure", "--n", "2", "--a", "1", "--window", "0", "4", "--supported-in"], "");
    assert!(!supported.as_array().unwrap().is_empty());
    assert_eq!(dmbetti(&["pure", "--n", "2", "--window", "4", "0"], "").code, 1);
}

#[test]
fn cones() {
    let cone = r#"{"window": [0, 1], "generators": [["1", "0"], ["1", "1"]]}"#;
    let h = ok(&["cone-facets"], cone);
    assert_eq!(h["inequalities"].as_array().unwrap().len(), 2);
    let inside = ok(&["cone-member"], r#"{"vector": ["2", "1"], "window": [0, 1], "generators": [["1", "0"], ["1", "1"]]}"#);
    assert_eq!(inside, json!({"inside": {"coefficients": ["1/1", "1/1"]}}));
    let outside = ok(&["cone-member"], r#"{"vector": ["0", "1"], "window": [0, 1], "generators": [["1", "0"], ["1", "1"]]}"#);
    assert!(outside["outside"]["functional"].is_array());
}

#[test]
fn gamma_and_pairing() {
    let g = ok(&["gamma", "--window", "-2", "2"], r#"{"line_bundle": {"m": 1, "d": 0}}"#);
    assert_eq!(g["entries"], json!({"-2": "1/1", "0": "1/1", "1": "2/1", "2": "3/1"}));
    let p = ok(&["pair"], r#"{"betti": {"0": 1, "1": 2, "2": 1}, "spec": {"line_bundle": {"m": 1, "d": 0}}}"#);
    assert_eq!(p["entries"], json!({"0": "1/1", "2": "1/1"}));
    let bad = dmbetti(&["gamma", "--window", "0", "1"], r#"{"supernatural": {"roots": [0, 0]}}"#);
    assert_eq!(bad.code, 2);
}

#[test]
fn audit_small() {
    let r = ok(&["audit", "--n", "2", "--window", "0", "4", "--radius", "4"], "");
    assert_eq!(r["all_matched"], json!(true));
    assert_eq!(r["generators"], json!(10));
}

#[test]
fn random_modules_and_barcodes() {
    let samples = ok(&["random-dm", "--seed", "3", "--count", "4"], "");
    let samples = samples.as_array().unwrap();
    assert_eq!(samples.len(), 4);
    for s in samples {
        let module = serde_json::to_string(&s["module"]).unwrap();
        let b = ok(&["barcode"], &module);
        assert_eq!(b["barcode"], s["barcode"]);
    }
}

#[test]
fn output_file_and_determinism() {
    let dir = std::env::temp_dir().join(format!("dmbetti-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let args = ["audit", "--n", "3", "--window", "0", "5", "--radius", "3"];
    let first = dmbetti(&args, "");
    let second = dmbetti(&args, "");
    assert_eq!(first.code, 0);
    assert_eq!(first.stdout, second.stdout);
    let p = path.to_str().unwrap();
    let written = dmbetti(&["random-dm", "--seed", "11", "--count", "2", "--out", p], "");
    assert_eq!(written.code, 0);
    assert!(written.stdout.is_empty());
    let again = dmbetti(&["random-dm", "--seed", "11", "--count", "2"], "");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), again.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

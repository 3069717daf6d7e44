use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_hurwitz")).args(args).output().expect("binary runs");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), json)
}

#[test]
fn compute_examples() {
    let (code, v) = run(&["compute", "--type", "simple", "--mu", "2", "--nu", "1,1", "--g", "0", "--method", "oracle"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "1/1");
    assert_eq!(v["method"], "oracle");
    let (code, v) =
        run(&["compute", "--type", "simple", "--mu", "3", "--nu", "3", "--g", "0", "--method", "character"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "1/3");
    let (code, _) = run(&["compute", "--type", "simple", "--mu", "2", "--nu", "1,1,1", "--g", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn compute_methods_agree() {
    let args = |method| {
        [
            "compute", "--type", "mixed", "--mu", "3,1", "--nu", "2,2", "--p", "1", "--q", "1", "--r", "0", "--method",
            method,
        ]
    };
    let (code, oracle) = run(&args("oracle"));
    assert_eq!(code, 0);
    for method in ["character", "chamber"] {
        let (code, v) = run(&args(method));
        assert_eq!(code, 0, "{method}");
        assert_eq!(v["value"], oracle["value"], "{method}");
    }
}

#[test]
fn compute_errors() {
    let on_wall = ["compute", "--type", "monotone", "--g", "0", "--mu", "2,2", "--nu", "2,2", "--method", "chamber"];
    assert_eq!(run(&on_wall).0, 3);
    assert_eq!(run(&["compute", "--type", "simple", "--g", "0", "--mu", "9", "--nu", "9", "--method", "oracle"]).0, 4);
    assert_eq!(run(&["compute", "--type", "simple", "--g", "0", "--mu", "2,x", "--nu", "3"]).0, 2);
    assert_eq!(run(&["compute", "--type", "mixed", "--g", "0", "--mu", "2", "--nu", "2"]).0, 2);
}

#[test]
fn chamber_poly_examples() {
    let (code, v) = run(&["chamber-poly", "--type", "strict", "--g", "0", "--m", "1", "--n", "2", "--sample", "3:1,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["degree"], 0);
    assert_eq!(v["chamber"]["sample"]["mu"], serde_json::json!([3]));
    assert_eq!(v["polynomial"][0]["coeff"], "1/1");
    let (code, _) =
        run(&["chamber-poly", "--type", "monotone", "--g", "1", "--m", "2", "--n", "2", "--sample", "2,2:2,2"]);
    assert_eq!(code, 3);
    let (code, _) = run(&["chamber-poly", "--type", "simple", "--g", "0", "--m", "1", "--n", "1", "--sample", "2:2"]);
    assert_eq!(code, 5);
}

/// Constant term 1 at `m = n = 1`, `g = 1`, and a passing constant-term suite.
#[test]
fn constant_term_examples() {
    let (code, v) = run(&["chamber-poly", "--type", "monotone", "--g", "1", "--m", "1", "--n", "1", "--sample", "2:2"]);
    assert_eq!(code, 0);
    let constant = v["polynomial"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["exps"].as_object().unwrap().values().all(|e| e == 0))
        .map(|t| t["coeff"].clone());
    let (suite_code, _) = run(&["verify", "--suite", "constant-term", "--g", "1"]);
    assert_eq!((constant, suite_code), (Some(Value::from("1/1")), 0));
}

#[test]
fn wall_crossing_command() {
    let (code, v) = run(&["wall-crossing", "--type", "monotone", "--g", "0", "--sample", "3,1:2,2", "--wall", "1:1"]);
    assert_eq!(code, 0);
    assert_eq!(v["wall"], serde_json::json!({"I": [1], "J": [1]}));
    assert_eq!(v["degree"], 1);
}

#[test]
fn verify_examples() {
    let (code, v) = run(&["verify", "--suite", "equality", "--dmax", "4", "--bmax", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["instances"].as_array().unwrap().len() as u64, v["count"].as_u64().unwrap());
    assert_eq!(run(&["verify", "--suite", "equality", "--dmax", "99"]).0, 4);
    assert_eq!(run(&["verify", "--suite", "one-part", "--dmax", "5"]).0, 0);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("hurwitz-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, _) = run(&["compute", "--type", "strict", "--g", "0", "--mu", "2", "--nu", "1,1", "--out", p]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["input"]["r"], 1);
}

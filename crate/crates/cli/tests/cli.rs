use std::process::{Command, Output};

use serde_json::Value;

fn hermkq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermkq")).args(args).env_remove("HERMKQ_CAP").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn witt_f2_has_two_classes() {
    let out = hermkq(&["witt", "--ring", "F2", "--epsilon", "1", "--variant", "min", "--max-rank", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["result"]["class_count"], 2);
    assert_eq!(doc["input"]["max_rank"], 4);
    assert!(doc["version"].is_string());
}

#[test]
fn ring_check_on_fq_document() {
    let out = hermkq(&["ring-check", "--ring", r#"{"kind":"Fq","p":2,"deg":2,"involution":"frobenius"}"#]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["result"]["involution"]["violation_count"], 0);
    assert_eq!(doc["result"]["split_unit"], "w");
}

#[test]
fn reports_are_byte_identical() {
    let args = ["group", "--form", r#"{"ring":"F4","variant":"el","matrix":[[0,1],[0,0]]}"#, "--list"];
    let a = hermkq(&args);
    let b = hermkq(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn failed_check_exits_one() {
    let input = r#"{"ring":"Z/4","ideal":2,"p0":[[1,0],[0,0]],"p1":[[1,1],[0,0]]}"#;
    let out = hermkq(&["clauwens", "conjugate-projectors", "--input", input]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["passed"], false);
    let failed: Vec<&str> = doc["result"]["checks"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"p1 is self-adjoint"));
}

#[test]
fn malformed_input_exits_two() {
    assert_eq!(hermkq(&["witt", "--ring", "Q"]).status.code(), Some(2));
    let out = hermkq(&["clauwens", "sqrt-nilpotent", "--input", r#"{"ring":"Z/9","nu":[[0]],"extra":1}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].as_str().unwrap().contains("unknown field"));
    assert_eq!(hermkq(&["form-check", "--form", "{not json"]).status.code(), Some(2));
}

#[test]
fn cap_exhaustion_exits_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_hermkq"))
        .args(["witt", "--ring", "F2", "--max-rank", "4"])
        .env("HERMKQ_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].as_str().unwrap().contains("cap"));
    let out = hermkq(&["--cap", "10", "witt", "--ring", "F2", "--max-rank", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_format() {
    let out = hermkq(&["xi", "--ring", "F2", "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Z/2"), "{text}");
}

#[test]
fn clauwens_subcommands() {
    let product = r#"{"theta":{"ring":"F2","coefficients":[[[0]],[[1]]]},"delta":{"epsilon":1,"matrix":[[0,1],[0,0]]}}"#;
    let out = hermkq(&["clauwens", "product", "--input", product]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["rank"], 2);

    let lin = r#"{"theta":{"ring":"F2","coefficients":[[[1]],[[0]],[[1]]]},"delta":{"epsilon":1,"matrix":[[0,1],[0,0]]}}"#;
    let out = hermkq(&["clauwens", "linearize", "--input", lin]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    for step in doc["result"]["transcript"].as_array().unwrap() {
        assert_eq!(step["check"], "pass");
        assert!(step["left-factor"].is_array() && step["right-factor"].is_array());
    }

    let l4 = r#"{"ring":"Z/9","g":[[1,3],[0,1]],"delta":{"epsilon":-1,"matrix":[[0,1],[0,0]]},"zeta":[[1,2],[4,7]],"depth":3}"#;
    assert_eq!(hermkq(&["clauwens", "lemma4", "--input", l4]).status.code(), Some(0));

    let sq = r#"{"ring":"Z/9","nu":[[0,3],[3,0]],"lambda":5}"#;
    assert_eq!(hermkq(&["clauwens", "sqrt-nilpotent", "--input", sq]).status.code(), Some(0));

    let all = r#"{"ring":"Z/4","ideal":2}"#;
    let out = hermkq(&["clauwens", "conjugate-projectors", "--input", all]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["result"]["instances"].as_array().unwrap().len() > 1);
}

#[test]
fn degenerate_theta_is_an_input_error() {
    let input = r#"{"theta":{"ring":"F2","coefficients":[[[1]]]},"delta":{"epsilon":1,"matrix":[[0,1],[0,0]]}}"#;
    assert_eq!(hermkq(&["clauwens", "product", "--input", input]).status.code(), Some(2));
}

#[test]
fn file_input() {
    let dir = std::env::temp_dir().join(format!("hermkq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("form.json");
    std::fs::write(&path, r#"{"ring":"F2","variant":"min","matrix":[[1,1],[0,1]]}"#).unwrap();
    let out = hermkq(&["arf", "--form", &format!("@{}", path.display())]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["arf_bit"], 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn whitehead_and_dickson() {
    let out = hermkq(&["whitehead", "--ring", "F4", "--random", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let out = hermkq(&["whitehead", "--ring", "Z/7", "--alpha", "[[2]]", "--beta", "[[3]]"]);
    assert_eq!(out.status.code(), Some(0));
    let out = hermkq(&["whitehead", "--ring", "Z/7", "--alpha", "[[0]]", "--beta", "[[3]]"]);
    assert_eq!(out.status.code(), Some(2));
    let form = r#"{"ring":"F2","variant":"min","matrix":[[0,1],[0,0]]}"#;
    assert_eq!(hermkq(&["dickson", "--form", form]).status.code(), Some(0));
}

#[test]
fn verify_single_criterion() {
    let out = hermkq(&["verify", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["result"]["criteria"][0]["criterion"], 5);
    assert_eq!(hermkq(&["verify", "0"]).status.code(), Some(2));
}

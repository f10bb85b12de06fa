use std::process::{Command, Output};

use serde_json::Value;

fn zz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zz")).args(args).env_remove("ZZ_FIELD").output().expect("zz runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn dims_matches_golden_file() {
    let out = zz(&["dims", "--dmax", "2", "--smax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = include_str!("golden/dims_d2_s3.json");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
    let table = String::from_utf8(out.stderr).unwrap();
    assert!(table.contains("d=2:  2 12 30"), "{table}");
}

#[test]
fn pbw_two_orderings() {
    let alpha = json(&zz(&["pbw", "--preset", "two-ordering", "--order", "alphabetical"]));
    assert_eq!(alpha["records"][0]["data"]["verdict"], "not-pbw");
    let second = json(&zz(&["pbw", "--preset", "two-ordering", "--order", "alpha,delta,epsilon,beta,gamma"]));
    assert_eq!(second["records"][0]["data"]["verdict"], "pbw-basis");
    assert_eq!(second["records"][0]["status"], "pass");
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let a = zz(&["suite", "--level", "smoke", "--seed", "7"]);
    let b = zz(&["suite", "--level", "smoke", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!String::from_utf8_lossy(&a.stdout).contains("milliseconds"));
}

#[test]
fn records_carry_anchor_and_status() {
    let v = json(&zz(&["suite", "--level", "smoke"]));
    let recs = v["records"].as_array().unwrap();
    assert!(recs.len() > 20);
    let names: Vec<&str> = recs.iter().map(|r| r["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    for r in recs {
        assert!(!r["anchor"].as_str().unwrap().is_empty());
        assert!(["pass", "fail", "unknown"].contains(&r["status"].as_str().unwrap()));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(zz(&["frobenius"]).status.code(), Some(2));
    assert_eq!(zz(&["bogus"]).status.code(), Some(2));
    assert_eq!(zz(&["twists", "--d", "1", "--s", "3", "--relation", "99"]).status.code(), Some(2));
    let bad_field = Command::new(env!("CARGO_BIN_EXE_zz")).args(["dims"]).env("ZZ_FIELD", "Fp:4").output().unwrap();
    assert_eq!(bad_field.status.code(), Some(2));
    assert_eq!(zz(&["longest", "--d", "1", "--s", "2"]).status.code(), Some(0));
}

#[test]
fn field_override_is_recorded() {
    let out = Command::new(env!("CARGO_BIN_EXE_zz")).args(["dims", "--dmax", "1", "--smax", "2"]).env("ZZ_FIELD", "Fp:101").output().unwrap();
    let v = json(&out);
    assert_eq!(v["field"], "Fp:101");
    assert_eq!(v["records"][0]["data"]["dims"], serde_json::json!([2, 6]));
}

#[test]
fn group_dump_has_witnesses() {
    let v = json(&zz(&["group", "--d", "2", "--s", "2"]));
    let data = &v["records"][0]["data"];
    assert_eq!(data["generators"].as_array().unwrap().len(), 3);
    let kinds: Vec<&str> = data["relations"].as_array().unwrap().iter().map(|r| r["witness"]["kind"].as_str().unwrap()).collect();
    assert!(kinds.contains(&"cycle"));
    assert_eq!(data["longest_word_length"], 4);
}

#[test]
fn twists_timings_only_on_request() {
    let plain = zz(&["twists", "--d", "1", "--s", "3", "--mode", "direct"]);
    assert!(!String::from_utf8_lossy(&plain.stdout).contains("milliseconds"));
    let timed = zz(&["twists", "--d", "1", "--s", "3", "--mode", "direct", "--timings", "--longest"]);
    let v = json(&timed);
    assert!(v["records"][0]["data"]["outcomes"][0].get("milliseconds").is_some());
    assert_eq!(v["records"].as_array().unwrap().len(), 2);
}

#[test]
fn mckay_emits_texts() {
    let out = zz(&["mckay", "--orders", "3", "--text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[vertices]") && text.contains("[relations]"), "{text}");
    let v = json(&zz(&["mckay", "--orders", "2,2", "--vbar", "--bound", "2"]));
    assert_eq!(v["records"][0]["data"]["arrows"], 12);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("zz-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let out = zz(&["equivariant", "--orders", "3", "--s", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "equivariant");
    std::fs::remove_dir_all(&dir).unwrap();
}

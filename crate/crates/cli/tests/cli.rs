use std::path::PathBuf;
use std::process::Command;

use crystal_cli::run;
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("crystal").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn call_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json", "-"];
    full.extend_from_slice(args);
    let (code, out, _) = call(&full);
    (code, serde_json::from_str(&out).expect("report is JSON"))
}

#[test]
fn crystal_of_b2_table() {
    let (code, out, _) = call(&["crystal", "--table", &data("b2.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("E_c^x = {e22}"), "{out}");
    assert!(out.contains("I_c = {0, e22}"), "{out}");
    assert!(out.contains("boundary set Z = {chi{e22}}"), "{out}");
    assert!(out.contains("restriction certificate: PASS"), "{out}");

    let (code, r) = call_json(&["crystal", "--builtin", "B2(2)"]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["payload"]["crystal"]["ecx"], serde_json::json!(["e22"]));
    assert_eq!(r["payload"]["restriction_certificate"]["crystal_arrows"], 1);
    assert!(r["provenance"]["boundary"].is_string());
}

#[test]
fn scale_violation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = std::fs::read_to_string(data("b2.json")).unwrap().replace("\"e21\": \"1/2\"", "\"e21\": \"1\"");
    std::fs::write(&bad, text).unwrap();
    let (code, r) = call_json(&["crystal", "--table", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "violation");
    assert_eq!(r["witness"]["kind"], "scale_not_multiplicative");
}

#[test]
fn verify_builtin_and_directory_catalogs() {
    let (code, out, _) = call(&["verify", "--suite", "all", "--seed", "7"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("0 failed"));

    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(data("b2.json"), dir.path().join("b2.json")).unwrap();
    let text = std::fs::read_to_string(data("b2.json")).unwrap().replace("\"e12\": \"2\"", "\"e12\": \"3\"");
    std::fs::write(dir.path().join("b2_corrupt.json"), text).unwrap();
    let (code, r) = call_json(&["verify", "--suite", "finite", "--catalog", dir.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    let detail = r["witness"]["detail"].as_str().unwrap();
    assert!(r["witness"]["item"].as_str().unwrap().contains("b2_corrupt"));
    assert!(detail.contains("e12") && detail.contains("e21"), "{detail}");

    let empty = tempfile::tempdir().unwrap();
    let (code, _, err) = call(&["verify", "--catalog", empty.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("no .json tables"));
}

#[test]
fn verify_reports_are_reproducible() {
    let (_, a, _) = call(&["--json", "-", "verify", "--suite", "ktheory", "--seed", "11"]);
    let (_, b, _) = call(&["--json", "-", "verify", "--suite", "ktheory", "--seed", "11"]);
    assert_eq!(a, b);
}

#[test]
fn zeta_and_kms_values() {
    let (code, out, _) = call(&["zeta", "--family", "axb", "--beta", "3", "--cutoff", "10000/1"]);
    assert_eq!(code, 0);
    assert!(out.contains("= 1.6449 +-"), "{out}");

    let (code, r) = call_json(&["zeta", "--family", "free", "--weights", "2,2", "--beta", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["threshold"]["beta_star"], 2.0);
    assert_eq!(r["payload"]["zeta"]["cutoff"], "4096/1");

    let (code, r) = call_json(&["kms", "--family", "axb", "--query", &data("axb_query.json")]);
    assert_eq!(code, 0);
    let v = r["payload"]["value"]["re"].as_f64().unwrap();
    assert!((v - 6.0 / std::f64::consts::PI.powi(2)).abs() < 1e-3);
    assert!(r["payload"]["tail"].as_f64().unwrap() > 0.0);
    assert!(r["payload"]["classes_used"].as_u64().unwrap() > 0);

    let (code, r) =
        call_json(&["kms", "--family-file", &data("free22.json"), "--beta", "3", "--element", r#"{"s":[0],"t":[0]}"#]);
    assert_eq!(code, 0);
    assert!((r["payload"]["value"]["re"].as_f64().unwrap() - 0.125).abs() < 1e-9);

    let (code, r) = call_json(&[
        "ground",
        "--family",
        "axb",
        "--trace",
        &data("half_turn.json"),
        "--element",
        r#"{"s":[2,1],"t":[1,1]}"#,
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["value"]["re"], -1.0);
}

#[test]
fn ktheory_commands() {
    let (code, r) = call_json(&["ktheory", "smith", "--matrix", &data("snf.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["diagonal"], serde_json::json!(["2", "4"]));

    let (code, out, _) = call(&["ktheory", "cokernel", "--matrix", &data("snf.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("Z/2 + Z/4"), "{out}");

    let (code, r) = call_json(&["ktheory", "circle", "--presentation", &data("t2_minus_2.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["hypothesis_t_regular"], true);
    assert_eq!(r["payload"]["dim_m_mod_t"], 0);

    let (code, r) = call_json(&["ktheory", "quotients", "--presentation", &data("t_minus_1.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["at_t_equals_1"]["free_rank"], 1);

    let (code, r) = call_json(&["ktheory", "graph"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["rows"][0], serde_json::json!(["1", "1", "-1", "0", "0", "0"]));

    let (code, r) = call_json(&["ktheory", "dynam", "--cycle", "2", "--truncation", "5"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["coker_t"]["free_rank"], 1);
    let (code, _, _) = call(&["ktheory", "dynam", "--cycle", "3", "--truncation", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(call(&["bogus"]).0, 2);
    assert_eq!(call(&[]).0, 2);
    assert_eq!(call(&["crystal", "--table", "/nonexistent.json"]).0, 2);
    assert_eq!(call(&["crystal", "--builtin", "B9"]).0, 2);
    assert_eq!(call(&["zeta", "--family", "free", "--weights", "1/2", "--beta", "3"]).0, 2);
    assert_eq!(call(&["zeta", "--family", "axb", "--beta", "-1"]).0, 2);
    assert_eq!(call(&["kms", "--family", "axb", "--beta", "2", "--element", r#"{"s":[0,1],"t":[0,1]}"#]).0, 2);
    assert_eq!(call(&["kms", "--family", "free", "--weights", "1,1", "--beta", "2", "--element", "{}"]).0, 2);
    let (code, _, err) = call(&["ktheory", "smith", "--matrix", &data("b2.json")]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn json_file_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let (code, _, _) =
            call(&["--json", p.to_str().unwrap(), "crystal", "--table", &data("disconnected_pair.json")]);
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn schema_and_binary() {
    let (code, out, _) = call(&["--emit-schema"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    for key in ["table", "family", "trace", "kms_query", "matrix", "presentation", "graph", "substitution", "report"] {
        assert!(v.get(key).is_some(), "missing schema {key}");
    }

    let status =
        Command::new(env!("CARGO_BIN_EXE_crystal")).args(["crystal", "--table", &data("b2.json")]).output().unwrap();
    assert_eq!(status.status.code(), Some(0));
    let status = Command::new(env!("CARGO_BIN_EXE_crystal")).arg("nonsense").output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}

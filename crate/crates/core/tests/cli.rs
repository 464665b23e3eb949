use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ricci(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ricci")).args(args).output().unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ricci-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn triangle_curvatures() {
    let g = scratch(
        "triangle.json",
        r#"{"vertices":["a","b","c"],"edges":[{"u":"a","v":"b","len":1},{"u":"b","v":"c","len":1},{"u":"a","v":"c","len":1}]}"#,
    );
    let out = ricci(&["curvature", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    for e in json["edges"].as_array().unwrap() {
        assert!((e["kappa"].as_f64().unwrap() - 1.5).abs() < 1e-9);
    }
    assert!((json["action"].as_f64().unwrap() - 4.5).abs() < 1e-9);
}

#[test]
fn path_curvatures_with_t() {
    let g = scratch(
        "path3.json",
        r#"{"vertices":["a","b","c"],"edges":[{"u":"a","v":"b","len":1},{"u":"b","v":"c","len":1}]}"#,
    );
    let out = ricci(&["--t", "0.2", "curvature", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for e in stdout_json(&out)["edges"].as_array().unwrap() {
        assert!((e["kappa"].as_f64().unwrap() - 1.0).abs() < 1e-9);
        assert!((e["kappa_t"].as_f64().unwrap() - 0.2).abs() < 1e-12);
    }
}

#[test]
fn malformed_json_exits_2() {
    let g = scratch("bad.json", "{\"vertices\": [");
    assert_eq!(ricci(&["curvature", g.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(ricci(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_eom_exit_codes() {
    let t3 = ricci(&["gen", "tree", "--q", "3", "--depth", "3"]);
    assert_eq!(t3.status.code(), Some(0));
    let text = String::from_utf8(t3.stdout).unwrap();
    let path = scratch("t3.json", &text);
    assert_eq!(ricci(&["verify-eom", path.to_str().unwrap()]).status.code(), Some(0));

    let mut json: Value = serde_json::from_str(&text).unwrap();
    json["setting"]["lengths"][0]["len"] = Value::from(1.3);
    let perturbed = scratch("t3-perturbed.json", &json.to_string());
    assert_eq!(ricci(&["verify-eom", perturbed.to_str().unwrap()]).status.code(), Some(1));

    let cycle = String::from_utf8(ricci(&["gen", "cycle", "--n", "4"]).stdout).unwrap();
    let cycle = scratch("c4.json", &cycle);
    assert_eq!(ricci(&["verify-eom", cycle.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn gen_is_deterministic() {
    let a = ricci(&["gen", "two-progression", "--q", "3", "--m", "1", "--s", "1", "--alpha", "0.25", "--y", "3", "--depth", "3"]);
    let b = ricci(&["gen", "two-progression", "--q", "3", "--m", "1", "--s", "1", "--alpha", "0.25", "--y", "3", "--depth", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let path = scratch("tp.json", &String::from_utf8(a.stdout).unwrap());
    assert_eq!(ricci(&["verify-eom", path.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn solve_eom_and_ghy_action() {
    let text = String::from_utf8(ricci(&["gen", "tree", "--q", "2", "--depth", "3"]).stdout).unwrap();
    let path = scratch("t2.json", &text);
    let out = ricci(&["solve-eom", path.to_str().unwrap(), "--restarts", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["result"]["converged"], Value::Bool(true));

    let out = ricci(&["action", path.to_str().unwrap(), "--variant", "ghy"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((stdout_json(&out)["total"].as_f64().unwrap() + 22.0).abs() < 1e-9);
}

#[test]
fn bounds_on_matching_setting() {
    let text = String::from_utf8(ricci(&["--eps", "1e-3", "gen", "matching", "--n", "4"]).stdout).unwrap();
    let path = scratch("k4m.json", &text);
    let out = ricci(&["bounds", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["ok"], Value::Bool(true));
    assert_eq!(json["complete_bound"].as_f64(), Some(8.0));
}

#[test]
fn search_writes_out_file() {
    let text = String::from_utf8(ricci(&["gen", "complete", "--n", "3"]).stdout).unwrap();
    let path = scratch("k3.json", &text);
    let out_path = path.with_file_name("k3-max.json");
    let out = ricci(&[
        "search",
        path.to_str().unwrap(),
        "--objective",
        "max",
        "--restarts",
        "2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert!((json["result"]["objective"].as_f64().unwrap() - 4.5).abs() < 1e-6);
}

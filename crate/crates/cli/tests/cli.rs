use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn dbplumb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dbplumb"))
        .args(args)
        .env_remove("DBP_BUDGET")
        .output()
        .expect("binary runs")
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).expect("golden file")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("json output")
}

fn check_golden(args: &[&str], file: &str) -> Value {
    let out = dbplumb(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out), golden(file), "output of {args:?} drifted from {file}");
    json(&out)
}

#[test]
fn suite_k1_matches_golden() {
    let v = check_golden(&["suite", "--k", "1", "--field", "q", "--output", "json"], "suite_k1_q.json");
    for key in ["tool_version", "command", "inputs", "checks", "payloads", "status"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn a5_unit_check_matches_golden() {
    let v = check_golden(
        &[
            "group", "unit-check", "--group", "A5", "--ring", "z", "--element", "49 + 26*C1 - 10*C2 - 16*C4", "--output", "json",
        ],
        "unit_check_a5.json",
    );
    assert_eq!(v["status"], "pass");
    assert!(v["payloads"]["certificate"]["inverse"].is_string());
}

#[test]
fn gate_surgery_lens5_matches_golden() {
    let v = check_golden(
        &["gate", "surgery", "--k", "5", "--summands", "lens(5)", "--output", "json"],
        "gate_surgery_lens5.json",
    );
    assert_eq!(v["payloads"]["admissible"], true);
    let trace = v["payloads"]["trace"].as_array().unwrap();
    assert_eq!(trace.last().unwrap()["message"], "forces unknot (KMOS axiom)");
}

#[test]
fn text_and_json_agree() {
    for args in [
        vec!["suite", "--k", "2", "--field", "p:3"],
        vec!["gate", "surgery", "--k", "4", "--summands", "prism(1,2)"],
        vec!["tjurina", "--k", "2"],
    ] {
        let mut j = args.clone();
        j.extend(["--output", "json"]);
        let mut t = args.clone();
        t.extend(["--output", "text"]);
        let (jo, to) = (dbplumb(&j), dbplumb(&t));
        assert_eq!(jo.status.code(), to.status.code());
        let from_json: Vec<(String, String)> = json(&jo)["checks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| (c["status"].as_str().unwrap().to_string(), c["name"].as_str().unwrap().to_string()))
            .collect();
        let from_text: Vec<(String, String)> = stdout(&to)
            .lines()
            .filter_map(|l| {
                let rest = l.strip_prefix('[')?;
                let (status, rest) = rest.split_once("] ")?;
                let name = rest.split(':').next().unwrap();
                Some((status.to_string(), name.to_string()))
            })
            .collect();
        assert_eq!(from_json, from_text, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(dbplumb(&["suite", "--k", "0"]).status.code(), Some(64));
    assert_eq!(dbplumb(&["suite", "--k", "1", "--field", "p:4"]).status.code(), Some(64));
    assert_eq!(dbplumb(&["no-such-command"]).status.code(), Some(64));
    assert_eq!(dbplumb(&["gate", "surgery", "--k", "4", "--summands", "prism(1,2)"]).status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_dbplumb"))
        .args(["units", "--k", "2", "--field", "p:2"])
        .env("DBP_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(dbplumb(&["h0", "--input", "/nonexistent/file.toml"]).status.code(), Some(66));
}

#[test]
fn malformed_files_report_positions() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "field = \"q\"\nvertices = [\"0\"\narrows = 3\n").unwrap();
    let out = dbplumb(&["parse-check", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line "), "{err}");

    let expr = dir.path().join("expr.toml");
    std::fs::write(
        &expr,
        "field = \"q\"\nvertices = [\"0\"]\nrelations = [\"t * * t\"]\n[[arrows]]\nname = \"t\"\nsrc = \"0\"\ndst = \"0\"\n",
    )
    .unwrap();
    let out = dbplumb(&["h0", "--input", expr.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position"));
}

#[test]
fn present_then_parse_check_and_h0() {
    let dir = tempfile::tempdir().unwrap();
    for fam in ["w", "a", "g"] {
        let path = dir.path().join(format!("{fam}.toml"));
        let p = path.to_str().unwrap();
        let out = dbplumb(&["present", "--family", fam, "--k", "2", "--out", p]);
        assert_eq!(out.status.code(), Some(0));
        let out = dbplumb(&["parse-check", "--input", p, "--output", "json"]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        let out = dbplumb(&["h0", "--input", p, "--output", "json"]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json(&out)["payloads"]["dim"], 10);
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["suite", "--k", "2", "--field", "q", "--output", "json"];
    assert_eq!(stdout(&dbplumb(&args)), stdout(&dbplumb(&args)));
}

#[test]
fn group_presentations_from_flags_and_files() {
    let out = dbplumb(&["todd-coxeter", "--prism", "1,3", "--output", "json"]);
    assert_eq!(json(&out)["payloads"]["order"], 12);
    let out = dbplumb(&["abelianize", "--prism", "1,3", "--output", "json"]);
    assert_eq!(json(&out)["payloads"]["invariant_factors"], serde_json::json!(["4"]));
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("q8.toml");
    std::fs::write(&f, "generators = [\"i\", \"j\"]\nrelators = [\"i^4\", \"i^2 = j^2\", \"j*i*j^-1 = i^-1\"]\n").unwrap();
    let out = dbplumb(&["todd-coxeter", "--input", f.to_str().unwrap(), "--output", "json"]);
    assert_eq!(json(&out)["payloads"]["order"], 8);
    let out = dbplumb(&["group", "center", "--group", "A4", "--ring", "p:3", "--output", "json"]);
    assert_eq!(json(&out)["payloads"]["survey"]["center_dim"], 4);
}

#[test]
fn singular_point_parity() {
    for (k, expected) in [("2", true), ("3", false), ("4", true)] {
        let out = dbplumb(&["singular-point", "--k", k, "--output", "json"]);
        assert_eq!(json(&out)["payloads"]["singular"], expected, "k = {k}");
    }
}

//! Exit codes and output shapes of the `invgen` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn invgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invgen")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn keys(v: &Value) -> Vec<&str> {
    let mut k: Vec<&str> = v.as_object().expect("object").keys().map(String::as_str).collect();
    k.sort();
    k
}

#[test]
fn classes() {
    let out = invgen(&["classes", "--q", "7", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 7);
    let out = invgen(&["classes", "--q", "4", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 5);
    assert_eq!(keys(&v[0]), ["label", "order", "size"]);
    assert_eq!(v[1]["label"], "unip");
    let out = invgen(&["classes", "--p", "3", "--f", "2", "--format", "csv"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 8);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(invgen(&["classes", "--q", "6"]).status.code(), Some(2));
    assert_eq!(invgen(&["classes", "--q", "3"]).status.code(), Some(2));
    assert_eq!(invgen(&["classes"]).status.code(), Some(2));
    assert_eq!(invgen(&["graph", "--q", "5", "--power", "3"]).status.code(), Some(2));
    assert_eq!(invgen(&["verify", "--q-range", "9..4"]).status.code(), Some(2));
    assert_eq!(invgen(&["bogus"]).status.code(), Some(2));
}

#[test]
fn psi2() {
    let out = invgen(&["psi2", "--q", "5", "--method", "both", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(keys(&v), ["classes", "count", "match", "method", "pairs", "probability", "q"]);
    assert_eq!((v["count"].as_u64(), v["match"].as_bool()), (Some(4), Some(true)));
    assert!(String::from_utf8_lossy(&out.stderr).contains("match=true"));

    let out = invgen(&["psi2", "--q", "7", "--method", "structural", "--format", "json"]);
    let v = json(&out);
    assert_eq!(keys(&v), ["classes", "count", "method", "pairs", "probability", "q"]);
    assert_eq!(v["count"], 8);
    assert_eq!(v["pairs"][0], serde_json::json!(["inv", "unip:sq"]));

    let out = invgen(&["psi2", "--q", "7", "--format", "csv"]);
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    assert_eq!(text.lines().next(), Some("label1,label2"));
    assert_eq!(text.lines().count(), 9);

    assert_eq!(invgen(&["psi2", "--q", "101", "--method", "oracle"]).status.code(), Some(3));
}

#[test]
fn graph() {
    let out = invgen(&["graph", "--q", "7", "--plus", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8_lossy(&out.stdout).into_owned();
    assert_eq!(dot.matches("part=").count(), 4);
    assert_eq!(dot.matches(" -- ").count(), 4);

    let out = invgen(&["graph", "--q", "5", "--power", "2", "--plus", "--format", "json"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("components=1"));
    let v = json(&out);
    assert_eq!(keys(&v), ["component_of", "components", "edges", "method", "parts", "power", "q", "summary", "vertices"]);
    assert_eq!(keys(&v["summary"]), ["bipartite", "components", "diameter", "edges", "vertices"]);

    let out = invgen(&["graph", "--q", "9", "--format", "json"]);
    let v = json(&out);
    let vertices = v["vertices"].as_array().unwrap().len();
    let touched: std::collections::BTreeSet<u64> =
        v["edges"].as_array().unwrap().iter().flat_map(|e| [e[0].as_u64().unwrap(), e[1].as_u64().unwrap()]).collect();
    assert_eq!(vertices - touched.len(), 3);

    assert_eq!(invgen(&["graph", "--q", "31", "--power", "6"]).status.code(), Some(3));
}

#[test]
fn beta() {
    for (q, b) in [("5", 2), ("7", 4), ("9", 2)] {
        let out = invgen(&["beta", "--q", q, "--format", "json"]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["beta"], b);
        assert_eq!(
            keys(&v),
            [
                "beta",
                "component_bound",
                "even",
                "lower_bound_report",
                "orbits",
                "out_order",
                "psi2",
                "q",
                "sizes_divide_out",
                "swap_free",
                "within_bounds"
            ]
        );
    }
    let v = json(&invgen(&["beta", "--q", "25", "--format", "json"]));
    assert_eq!(v["lower_bound_report"]["bound"], "92378");
}

#[test]
fn verify() {
    let out = invgen(&["verify", "--q-range", "4..13", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(
        keys(&v),
        ["by_check", "checks_run", "extended", "failures", "passed", "probability_sup", "psi2_ratio_range", "q_count", "q_range"]
    );
    let out = invgen(&["verify", "--q-range", "4..13", "--extended", "--format", "json"]);
    assert_eq!(json(&out)["by_check"]["oracle-psi2"]["run"], 10);
    let out = invgen(&["verify", "--q-range", "4..1024"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS"));
}

#[test]
fn oracle_cap_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_invgen"))
        .args(["psi2", "--q", "7", "--method", "oracle"])
        .env("INVGEN_ORACLE_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn out_file() {
    let path = std::env::temp_dir().join(format!("invgen-cli-{}.csv", std::process::id()));
    let out = invgen(&["classes", "--q", "7", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 7);
    std::fs::remove_file(path).ok();
}

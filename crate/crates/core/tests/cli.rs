mod common;

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

use braess::netfile::parse;
use common::fixture_path;

fn braess(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_braess"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = braess(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&run_ok(args)).expect("valid JSON")
}

fn code(args: &[&str]) -> Option<i32> {
    braess(args).status.code()
}

fn temp_net(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn fx(name: &str) -> String {
    fixture_path(name).to_str().unwrap().to_owned()
}

#[test]
fn check_wheatstone_demo() {
    let v = json(&["check", &fx("wheatstone"), "--demo"]);
    assert_eq!(v["vulnerable"], true);
    let report = &v["equilibrium"]["report"];
    assert_eq!(report["L_full"], "2");
    assert_eq!(report["L_sub"], "3/2");
    assert_eq!(report["demand"], "1");
    assert_eq!(report["paradox"], true);
    assert_eq!(v["witness"]["a"], 0);
    assert_eq!(v["witness"]["d"], 3);
}

#[test]
fn check_without_witness_flag_reports_none() {
    let v = json(&["check", &fx("wheatstone")]);
    assert_eq!(v["vulnerable"], true);
    assert!(v["witness"].is_null());
    assert!(v.get("equilibrium").is_none());
}

#[test]
fn check_series2() {
    let v = json(&["check", &fx("series2")]);
    assert_eq!(v["vulnerable"], false);
    assert_eq!(v["deleted_edges"], Value::Array(vec![]));
}

#[test]
fn check_fig6c_deletes_the_back_edge() {
    let v = json(&["check", &fx("fig6c"), "--demo"]);
    assert_eq!(v["vulnerable"], false);
    assert!(v["equilibrium"].is_null());
    let deleted = v["deleted_edges"].as_array().unwrap();
    assert_eq!(deleted.len(), 1);
    assert_eq!(deleted[0]["tail"], 5);
    assert_eq!(deleted[0]["head"], 4);
}

#[test]
fn check_output_is_deterministic() {
    let file = fx("wheatstone");
    assert_eq!(
        run_ok(&["check", &file, "--witness"]),
        run_ok(&["check", &file, "--witness"])
    );
}

#[test]
fn check_dot() {
    let out = run_ok(&["check", &fx("wheatstone"), "--dot"]);
    assert!(out.starts_with("digraph net {"));
    assert!(out.contains("penwidth=2"));
}

#[test]
fn exit_codes_for_bad_input() {
    let same = temp_net("s 0\nt 0\n");
    assert_eq!(code(&["check", p(same.path())]), Some(2));
    let garbage = temp_net("s 0\nt 1\ne 0 x\n");
    let out = braess(&["check", p(garbage.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(code(&["check", "/nonexistent/net.txt"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn all_pairs_without_terminals() {
    let f = temp_net("e 0 1\ne 0 2\ne 1 2\ne 1 3\ne 2 3\n");
    let v = json(&["all-pairs", p(f.path())]);
    assert_eq!(v["any_vulnerable"], true);
    assert_eq!(v["pair"], serde_json::json!({ "s": 0, "t": 3 }));
    assert_eq!(v["pairs_checked"], 12);
    assert_eq!(v["vulnerable_pairs"], serde_json::json!([[0, 3]]));
}

#[test]
fn all_pairs_triangle() {
    let v = json(&["all-pairs", &fx("triangle")]);
    assert_eq!(v["any_vulnerable"], false);
    assert!(v["pair"].is_null());
    assert_eq!(v["pairs_checked"], 6);
}

#[test]
fn all_pairs_two_disjoint_series() {
    let f = temp_net("s 0\nt 2\ne 0 1\ne 1 2\ne 3 4\ne 4 5\n");
    let v = json(&["all-pairs", p(f.path())]);
    assert_eq!(v["any_vulnerable"], false);
    assert_eq!(v["pairs_checked"], 30);
}

#[test]
fn oracle_queries() {
    assert_eq!(json(&["oracle", "paths", &fx("wheatstone")])["count"], 3);
    assert_eq!(json(&["oracle", "paths", &fx("fig6a")])["count"], 1);
    let m = json(&["oracle", "mis", &fx("fig6a")]);
    assert_eq!(m["edges"].as_array().unwrap().len(), 2);
    let irr = json(&["oracle", "irr", &fx("fig6a")]);
    assert_eq!(irr["irredundant"], false);
    assert_eq!(irr["redundant_edges"], serde_json::json!([2, 3]));
    assert_eq!(
        json(&["oracle", "vulnerable", &fx("wheatstone")])["vulnerable"],
        true
    );
    assert!(!json(&["oracle", "wembed", &fx("wheatstone")])["embedding"].is_null());
    assert!(json(&["oracle", "wembed", &fx("diamond")])["embedding"].is_null());
}

#[test]
fn oracle_guard_exit_code() {
    let mut text = String::from("s 0\nt 12\n");
    for v in 0..12 {
        text.push_str(&format!("e {v} {}\n", v + 1));
    }
    let f = temp_net(&text);
    assert_eq!(code(&["oracle", "vulnerable", p(f.path())]), Some(4));
    assert_eq!(code(&["check", p(f.path())]), Some(0));
}

#[test]
fn gadget_round_trip() {
    let out = run_ok(&["gadget", &fx("series2"), "0"]);
    assert!(out.starts_with("# irredundancy gadget for edge 0"));
    let g = parse(&out).unwrap();
    // Two copies of three nodes plus eight hub nodes.
    assert_eq!(g.node_count(), 14);
    assert_eq!(
        braess::netfile::emit(&g, &[]),
        out.lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| format!("{l}\n"))
            .collect::<String>()
    );
    let f = temp_net(&out);
    assert_eq!(json(&["oracle", "irr", p(f.path())])["irredundant"], true);
}

#[test]
fn gadget_of_redundant_edge() {
    let out = run_ok(&["gadget", &fx("fig6a"), "2"]);
    let f = temp_net(&out);
    assert_eq!(json(&["oracle", "irr", p(f.path())])["irredundant"], false);
}

#[test]
fn gadget_forbidden_edges() {
    let f = temp_net("s 0\nt 1\ne 0 1\ne 1 0\ne 2 2\n");
    assert_eq!(code(&["gadget", p(f.path()), "1"]), Some(2));
    assert_eq!(code(&["gadget", p(f.path()), "2"]), Some(2));
    assert_eq!(code(&["gadget", p(f.path()), "9"]), Some(2));
}

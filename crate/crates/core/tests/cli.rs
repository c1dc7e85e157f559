mod common;

use std::process::{Command, Output};

use ncdef::cli::{presentation_parse, presentation_render};
use ncdef::zoo::{karmazyn_contraction_presentation, laufer_presentation_with, length2_scheme_presentation, Lambda};
use ncdef::rational::q;
use serde_json::Value;

fn ncdef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncdef")).args(args).env_remove("NCDEF_MAX_DEGREE").output().unwrap()
}

fn fixture(name: &str) -> String {
    common::fixture_dir().join(name).to_string_lossy().into_owned()
}

fn stripped(o: &Output) -> Value {
    let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

#[test]
fn laufer_report_matches_golden() {
    let o = ncdef(&["zoo", "laufer", "--n", "1", "--lambda", "0,0", "--max-degree", "10", "--report", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let golden: Value = serde_json::from_str(include_str!("golden/laufer_n1.json")).unwrap();
    assert_eq!(stripped(&o), golden);
}

#[test]
fn reports_are_deterministic() {
    let args = ["zoo", "table", "--n", "1"];
    let a = ncdef(&args);
    let b = ncdef(&args);
    assert_eq!(stripped(&a), stripped(&b));
    let text = |o: &Output| {
        let s = String::from_utf8(o.stdout.clone()).unwrap();
        s.lines().filter(|l| !l.contains("elapsed_ms")).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(text(&a), text(&b));
}

#[test]
fn exit_code_contract() {
    assert_eq!(ncdef(&["matfac", "verify-all"]).status.code(), Some(0));
    assert_eq!(ncdef(&["zoo", "karmazyn", "--length", "3", "--verify", "--max-degree", "10"]).status.code(), Some(0));
    // a table computed with too small a bound fails its dimension checks
    assert_eq!(ncdef(&["zoo", "table", "--n", "1", "--max-degree", "4"]).status.code(), Some(1));
    let inf = fixture("anticommuting.pres");
    assert_eq!(ncdef(&["gb", "--input", &inf, "--max-degree", "8"]).status.code(), Some(1));
    assert_eq!(ncdef(&["gb", "--input", &inf, "--max-degree", "8", "--report-only"]).status.code(), Some(0));
    assert_eq!(ncdef(&["zoo", "laufer", "--n", "1", "--lambda", "0"]).status.code(), Some(2));
    assert_eq!(ncdef(&["zoo", "laufer", "--n", "1", "--bogus"]).status.code(), Some(2));
    assert_eq!(ncdef(&["gb", "--input", "/nonexistent.pres"]).status.code(), Some(2));
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = std::env::temp_dir().join(format!("ncdef-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.pres");
    std::fs::write(&path, "generators: a b\nrelations: a*b ; b^2 + 1\n").unwrap();
    let o = ncdef(&["gb", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:18"), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn claims_and_env_default() {
    let f = fixture("laufer_n1.pres");
    let o = ncdef(&["gb", "--input", &f, "--claims", "a*b^3 ; a^3", "--max-degree", "10", "--report", "text"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let slow = fixture("anticommuting_cubic.pres");
    let with_env = Command::new(env!("CARGO_BIN_EXE_ncdef"))
        .args(["gb", "--input", &slow])
        .env("NCDEF_MAX_DEGREE", "4")
        .output()
        .unwrap();
    assert_eq!(with_env.status.code(), Some(1));
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_ncdef"))
        .args(["gb", "--input", &slow, "--max-degree", "8"])
        .env("NCDEF_MAX_DEGREE", "4")
        .output()
        .unwrap();
    assert_eq!(flag_wins.status.code(), Some(0));
}

#[test]
fn bundle_counts() {
    let o = ncdef(&["bundle", "--degrees", "1,0,-1", "--counts"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stripped(&o);
    assert_eq!(v["data"]["h0"], 3);
    assert_eq!(v["data"]["counts"]["generators"], 3);
}

#[test]
fn render_round_trips() {
    for (name, p) in common::corpus() {
        assert_eq!(presentation_parse(&presentation_render(&p)).unwrap(), p, "{name}");
    }
    let mut zoo = vec![
        length2_scheme_presentation(),
        laufer_presentation_with(2, &[Lambda::Symbolic, Lambda::Value(q(-3)), Lambda::Symbolic, Lambda::Value(q(1))])
            .unwrap(),
    ];
    for l in 1..=6 {
        zoo.push(karmazyn_contraction_presentation(l).unwrap());
    }
    for p in zoo {
        assert_eq!(presentation_parse(&presentation_render(&p)).unwrap(), p);
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn mdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdist"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

#[test]
fn validate_t1_is_globally_consistent() {
    let out = mdist(&["validate", &fixture("t1.toml")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("consistency: global"));
    assert!(text.contains("valid: yes"));
}

#[test]
fn validate_names_the_asymmetric_pair() {
    let out = mdist(&["validate", &fixture("invalid_asymmetric.toml")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("not symmetric at (1, 2)"));
}

#[test]
fn validate_names_the_voter_with_an_empty_ball() {
    let out = mdist(&["validate", &fixture("invalid_empty_ball.toml")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("voter 1"));
}

#[test]
fn unreadable_and_malformed_files_are_usage_errors() {
    assert_eq!(
        mdist(&["validate", "/nonexistent/file.toml"]).status.code(),
        Some(2)
    );
    let bad = scratch("malformed.toml");
    fs::write(&bad, "format_version = 1\n[metric\n").unwrap();
    let out = mdist(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    assert_eq!(mdist(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn run_t1_plurality() {
    let out = mdist(&["run", &fixture("t1.toml"), "--rule", "plurality"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["winner"], "c1");
    assert_eq!(v["distance_distortion"]["value"], "1");
}

#[test]
fn run_generated_copeland_hard_instance() {
    let path = scratch("copeland100.toml");
    let p = path.to_str().unwrap();
    let out = mdist(&["generate", "copeland", "--n", "100", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&mdist(&["run", p, "--rule", "copeland"]));
    assert_eq!(v["winner"], "c2");
    assert_eq!(v["ab_distortion"]["value"], "49/50");
    assert_eq!(v["certificate"]["passed"], true);
    let v = json(&mdist(&["run", p, "--rule", "schulze"]));
    let ab: mdist_core::Rational = v["ab_distortion"]["value"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!(ab <= mdist_core::Rational::new(2, 3));
}

#[test]
fn run_with_enumerated_ties() {
    let out = mdist(&[
        "run",
        &fixture("copeland.toml"),
        "--rule",
        "schulze",
        "--enumerate-ties",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["worst_profile"]["ab_distortion"]["value"].is_string());
}

#[test]
fn run_rejects_unknown_rules() {
    let out = mdist(&["run", &fixture("t1.toml"), "--rule", "dictator"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_certificates() {
    let out = mdist(&["generate", "stv-1d", "--m", "4", "--n", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("winner = \"c4\""));
    assert!(text.contains("expected = \"7/8\""));
    let text = stdout(&mdist(&["generate", "plurality", "--m", "3", "--n", "9"]));
    assert!(text.contains("expected = \"2/3\""));
    let out = mdist(&["generate", "stv-1d", "--m", "4", "--n", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_ell1_pair_writes_two_files() {
    let path = scratch("pair.toml");
    let out = mdist(&[
        "generate",
        "ell1-pair",
        "--n",
        "8",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    for s in ["a", "b"] {
        let f = scratch(&format!("pair-{s}.toml"));
        assert_eq!(
            mdist(&["validate", f.to_str().unwrap()]).status.code(),
            Some(0)
        );
    }
}

#[test]
fn curve_rows() {
    let out = mdist(&["curve", "--samples", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for row in [
        "0,inf,0,inf",
        "0.125,7,1/8,7",
        "0.25,3,1/4,3",
        "0.75,5,3/4,5",
        "1,inf,1,inf",
    ] {
        assert!(text.lines().any(|l| l == row), "missing {row}");
    }
    assert_eq!(mdist(&["curve", "--samples", "1"]).status.code(), Some(2));
}

#[test]
fn search_reports_the_best_instance() {
    let out = mdist(&[
        "search",
        "--rule",
        "plurality",
        "--objective",
        "ab",
        "--radii",
        "local",
        "--budget",
        "500",
        "--restarts",
        "4",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("# best instance"));
    let record: String = text
        .lines()
        .take_while(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    let v: serde_json::Value = serde_json::from_str(&record).unwrap();
    assert_eq!(v["search"]["evaluations"], 500);
    assert!(v["search"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn suite_properties_is_deterministic() {
    let a = mdist(&["suite", "properties", "--seed", "7"]);
    let b = mdist(&["suite", "properties", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        stdout(&a)
            .lines()
            .filter(|l| l.starts_with("[PASS]"))
            .count(),
        8
    );
    assert_eq!(mdist(&["suite", "nonsense"]).status.code(), Some(2));
}

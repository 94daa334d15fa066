use std::path::Path;
use std::process::{Command, Output};

use multistab::report::{PatternsJson, VerifyJson};
use multistab::spec::{parse_spec, spec_to_json};
use multistab_core::fixtures;

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multistab"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn run(args: &[&str]) -> Output {
    run_in(Path::new(env!("CARGO_TARGET_TMPDIR")), args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn example1_verify_text() {
    let o = run(&["example", "1", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("H1A  true, true"));
    assert!(text.contains("H2A  (true, true), (true, true)"));
    assert!(text.contains("H3A  true"));
    for v in [
        "-11.1458", "-1.8190", "1.8190", "11.1458", "-6.4372", "-0.9095", "0.9095", "6.4372",
    ] {
        assert!(text.contains(v), "{v} missing from\n{text}");
    }
}

#[test]
fn verify_json_round_trips_byte_for_byte() {
    for id in ["1", "2", "3", "4"] {
        let o = run(&["example", id, "--verify", "--format", "json"]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        let parsed: VerifyJson = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", text);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in [
            "h1a", "h2a", "h3a", "h4a", "h1b", "h2b", "bounds", "mu", "gamma",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}

#[test]
fn verify_writes_nothing_without_out() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["example", "2", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);

    let target = dir.path().join("report.json");
    let o = run_in(
        dir.path(),
        &[
            "example",
            "2",
            "--verify",
            "--format",
            "json",
            "--out",
            "report.json",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let parsed: VerifyJson =
        serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert!(parsed.passed);
}

#[test]
fn example3_patterns() {
    let o = run(&[
        "example",
        "3",
        "--patterns",
        "--transient",
        "200",
        "--format",
        "json",
        "--seed",
        "11",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let r: PatternsJson = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", text);
    assert_eq!(r.seed, 11);
    assert_eq!(r.patterns.len(), 4);
    assert!(r.patterns.iter().all(|p| p.contained()));
    assert!(r.passed);
}

#[test]
fn bad_decay_exits_with_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = fixtures::example1();
    spec.decay[0] = multistab_core::TrigSignal::constant(-0.5);
    std::fs::write(
        dir.path().join("bad_spec.json"),
        spec_to_json(&spec).unwrap(),
    )
    .unwrap();
    let o = run_in(dir.path(), &["verify", "bad_spec.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("H1 violation"), "{}", stderr(&o));
}

#[test]
fn failing_hypothesis_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = fixtures::example1();
    spec.decay = spec.decay.iter().map(|c| c.scaled(10.0)).collect();
    std::fs::write(dir.path().join("weak.json"), spec_to_json(&spec).unwrap()).unwrap();
    let o = run_in(dir.path(), &["verify", "weak.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAILED"));
}

#[test]
fn parse_errors_and_unknown_examples() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("broken.json"), "{\"N\": 2,").unwrap();
    let o = run_in(dir.path(), &["verify", "broken.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cannot parse spec"));

    let o = run(&["example", "5", "--verify"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown example 5"));

    let o = run(&["example", "1"]);
    assert_eq!(o.status.code(), Some(2), "an action flag is required");
}

#[test]
fn emitted_specs_match_fixtures() {
    for id in 1..=4u8 {
        let o = run(&["example", &id.to_string(), "--emit-spec"]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(
            parse_spec(&stdout(&o)).unwrap(),
            fixtures::example(id).unwrap()
        );
    }
}

#[test]
fn emitted_spec_feeds_verify() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &["example", "4", "--emit-spec", "--out", "ex4.json"],
    );
    assert_eq!(o.status.code(), Some(0));
    let o = run_in(dir.path(), &["verify", "ex4.json", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: VerifyJson = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.class, "B");
    assert_eq!(r.h1b, Some(vec![true, true]));
}

#[test]
fn simulate_csv() {
    let o = run(&[
        "example",
        "1",
        "--simulate",
        "--t-end",
        "1",
        "--dt",
        "0.1",
        "--phi",
        "2,1",
        "--stride",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x1,x2");
    assert_eq!(lines[1], "0,2,1");
    assert_eq!(lines.len(), 4);

    let o = run(&["example", "1", "--simulate", "--dt", "20"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn basins_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &[
            "example",
            "1",
            "--basins",
            "--grid",
            "-5:5:3,-5:5:3",
            "--t-end",
            "60",
            "--out",
            "b.csv",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[0], "x1,x2,label");
    assert_eq!(lines[1], "-5,-5,11");
    assert_eq!(lines[9], "5,5,22");
    let script = std::fs::read_to_string(dir.path().join("b.gp")).unwrap();
    assert!(script.contains("'b.csv'") && script.contains("set output 'b.png'"));
}

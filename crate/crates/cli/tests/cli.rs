use std::path::PathBuf;
use std::process::{Command, Output};

fn mbs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbs")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mbs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn xi_summary() {
    let o = mbs(&["xi", "--type", "A", "--rank", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "A1: 5 elements, 8 relations");
}

#[test]
fn usage_and_configuration_errors_exit_with_two() {
    assert_eq!(mbs(&["xi", "--type", "A", "--rank", "9"]).status.code(), Some(2));
    assert_eq!(mbs(&["xi", "--type", "A"]).status.code(), Some(2));
    assert_eq!(mbs(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mbs(&["hecke", "4", "2"]).status.code(), Some(2));
    assert_eq!(mbs(&["example", "eq", "2", "4"]).status.code(), Some(2));
    assert_eq!(mbs(&["poly", "--type", "B", "--rank", "2", "--counts", "2"]).status.code(), Some(2));
    let missing = scratch("absent.json");
    assert_eq!(mbs(&["check", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn dumps_are_deterministic() {
    let runs: &[&[&str]] = &[
        &["xi", "--type", "B", "--rank", "2", "--json"],
        &["example", "e1", "--type", "G", "--rank", "2"],
        &["example", "eq", "3", "2"],
        &["poly", "--type", "A", "--rank", "2", "--counts", "2", "--json"],
        &["hecke", "3", "2", "--json"],
    ];
    for args in runs {
        let (a, b) = (mbs(args), mbs(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn examples_pass_their_own_check() {
    for (name, extra) in [("e1", vec!["--type", "A", "--rank", "2"]), ("e1v:reflection", vec!["--type", "B", "--rank", "2"]), ("eq:2:3", vec![]), ("eq-binv:3:2", vec![])] {
        let path = scratch(&format!("{}.json", name.replace(':', "-")));
        let p = path.to_str().unwrap();
        let mut args = vec!["example", name, "--out", p];
        args.extend(&extra);
        let o = mbs(&args);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).starts_with("wrote "));
        let c = mbs(&["check", p]);
        assert_eq!(c.status.code(), Some(0), "{name}");
        assert!(stdout(&c).starts_with("PASS"));
    }
}

#[test]
fn check_rejects_a_mismatched_datum() {
    let path = scratch("a1.json");
    let p = path.to_str().unwrap();
    assert!(mbs(&["example", "e1", "--type", "A", "--rank", "1", "--out", p]).status.success());
    assert_eq!(mbs(&["check", p, "--type", "A", "--rank", "1"]).status.code(), Some(0));
    assert_eq!(mbs(&["check", p, "--type", "B", "--rank", "2"]).status.code(), Some(2));
}

#[test]
fn corrupted_file_fails_with_invertibility_violation() {
    let path = scratch("corrupt.json");
    let p = path.to_str().unwrap();
    assert!(mbs(&["example", "e1", "--type", "A", "--rank", "1", "--out", p]).status.success());
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // the first first-order map of the A1 example is an anodyne 2x2 permutation
    let first = &mut v["dprime"][0];
    assert_eq!(first["from"], ":0|:0");
    first["matrix"] = serde_json::json!([["0", "0"], ["0", "0"]]);
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let o = mbs(&["check", p]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("FAIL"));
    assert!(out.contains("MBS3"), "{out}");
}

#[test]
fn malformed_file_names_the_field() {
    let path = scratch("malformed.json");
    std::fs::write(&path, r#"{"datum": {"type": "A", "rank": 1}, "dims": []}"#).unwrap();
    let o = mbs(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("$.dims"));
}

#[test]
fn report_commands_pass() {
    for args in [vec!["poly", "--type", "B", "--rank", "2"], vec!["hecke", "2", "3"], vec!["orbits", "2", "2"]] {
        let o = mbs(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert!(stdout(&o).starts_with("PASS"));
    }
}

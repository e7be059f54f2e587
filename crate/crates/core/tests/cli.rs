use std::path::Path;
use std::process::Command;

fn dgtrace(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dgtrace")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_then_verify_every_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let unit = dir.path().join("unit.tr");
    let heavy = dir.path().join("weighted.tr");
    assert!(dgtrace(&["--generate", "uniform", "--n", "14", "--m", "40", "--seed", "3", "--out", s(&unit)]).status.success());
    assert!(dgtrace(&["--generate", "uniform", "--n", "10", "--m", "24", "--max-weight", "8", "--seed", "3", "--out", s(&heavy)])
        .status
        .success());
    for (algo, trace) in [
        ("es-ssr", &unit),
        ("st-reach", &unit),
        ("multi-pair", &unit),
        ("ssr", &unit),
        ("scc", &unit),
        ("dense-ssr", &unit),
        ("stsp-approx", &heavy),
        ("sssp-approx", &heavy),
    ] {
        let csv = dir.path().join(format!("{algo}.csv"));
        let out = dgtrace(&["--algo", algo, "--trace", s(trace), "--verify", "--counters", "--pairs", "0-13,2-5", "--out", s(&csv)]);
        assert!(out.status.success(), "{algo}: {}", String::from_utf8_lossy(&out.stderr));
        let text = std::fs::read_to_string(&csv).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# decremental-trace csv v1"));
        assert_eq!(lines.next(), Some("update_idx,op,answer,oracle,work_total,notes"));
        assert!(lines.all(|l| l.split(',').count() == 6));
    }
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.tr");
    std::fs::write(&t, "5 5 1\ne 0 1 1\ne 1 2 1\ne 2 0 1\ne 2 3 1\ne 3 4 1\nq scc 0\nd 2 0\nq scc 4\nd 2 3\n").unwrap();
    let run = || dgtrace(&["--algo", "scc", "--trace", s(&t), "--verify", "--counters", "--seed", "9"]).stdout;
    let first = run();
    assert_eq!(first, run());
    let text = String::from_utf8(first).unwrap();
    // Each q line answers once, then every registered query after each update.
    assert_eq!(text.lines().count(), 2 + 1 + 1 + 1 + 2);
    assert!(text.contains("1,d 2 0,0,0,"));
}

#[test]
fn explain_params_echoes_override() {
    let out = dgtrace(&["--algo", "st-reach", "--n", "64", "--m", "512", "--params", "k=2,b=8:4,c=16:4", "--explain-params"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("override: k=2,b=8:4,c=16:4\n"));
    assert!(text.contains("level 2: b=4 c=4"));
    let formula = String::from_utf8(dgtrace(&["--algo", "st-reach", "--n", "64", "--m", "512", "--explain-params"]).stdout).unwrap();
    assert!(formula.starts_with("schedule StSparse n=64 m=512"));
}

#[test]
fn malformed_trace_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("bad.tr");
    std::fs::write(&t, "3 1 1\ne 0 1 1\n\nd 0 7\n").unwrap();
    let out = dgtrace(&["--algo", "st-reach", "--trace", s(&t)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
}

#[test]
fn unsupported_query_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("q.tr");
    std::fs::write(&t, "3 1 1\ne 0 1 1\nq scc 1\n").unwrap();
    let out = dgtrace(&["--algo", "st-reach", "--trace", s(&t)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not supported"));
}

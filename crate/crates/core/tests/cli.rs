use std::path::Path;
use std::process::{Command, Output};

fn dsclust(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsclust"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_json(o: &Output) -> serde_json::Value {
    let line = String::from_utf8(o.stderr.clone()).unwrap();
    assert_eq!(line.trim().lines().count(), 1, "{line}");
    serde_json::from_str(line.trim()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_then_eval() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("problem.txt");
    let o = dsclust(&["gen", "--seed", "4", "--frame-size", "3", "-o", p(&problem)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&problem).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 7);

    // every subset with its smallest element
    let partition = dir.path().join("partition.txt");
    std::fs::write(&partition, "0,0\n1,1\n2,0\n3,2\n4,0\n5,1\n6,0\n").unwrap();
    let o = dsclust(&["eval", "--problem", p(&problem), "--partition", p(&partition)]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["mcf"], 0.0);

    let o = dsclust(&["eval", "--problem", p(&problem), "--partition", p(&partition), "--c0", "0.25"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["mcf"], 0.25);
}

#[test]
fn gen_to_stdout_all_ones() {
    let o = dsclust(&["gen", "--frame-size", "2", "--mass-mode", "all-ones"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("2, 1 2, 1\n"));
}

#[test]
fn run_writes_results_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let trace = dir.path().join("trace");
    let o = dsclust(&[
        "run", "--seed", "3", "--mode", "unknown-k", "--p", "0.7", "--columns", "6",
        "--max-iter", "12", "--trace-dir", p(&trace), "--grid-every", "4",
        "--domain-term", "literal", "--out", p(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let result: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(result["iterations"], 12);
    assert_eq!(result["seed"], 3);
    assert_eq!(result["mode"], "unknown-k");
    assert!(out.join("result.json").exists());
    assert!(out.join("partition.txt").exists());
    let scalars = std::fs::read_to_string(trace.join("scalars.csv")).unwrap();
    assert_eq!(scalars.lines().count(), 14);
    for t in [0, 4, 8, 12] {
        assert!(trace.join(format!("grid_{t:05}.csv")).exists());
    }

    // the written partition scores the same through eval
    let problem = dir.path().join("problem.txt");
    assert!(dsclust(&["gen", "--seed", "3", "-o", p(&problem)]).status.success());
    let o = dsclust(&[
        "eval", "--problem", p(&problem), "--partition", p(&out.join("partition.txt")),
        "--c0", &result["report"]["domain_conflict"].to_string(),
    ]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let a = report["mcf"].as_f64().unwrap();
    let b = result["report"]["mcf"].as_f64().unwrap();
    assert!((a - b).abs() <= 1e-12);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    std::fs::write(&config, "mode = \"fixed-k:4\"\n[params]\nmax_iterations = 7\n").unwrap();
    let o = dsclust(&["run", "--config", p(&config)]);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["mode"], "fixed-k:4");
    assert_eq!(r["iterations"], 7);

    let o = dsclust(&["run", "--config", p(&config), "--max-iter", "3", "--mode", "fixed-k:2"]);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["mode"], "fixed-k:2");
    assert_eq!(r["iterations"], 3);
}

#[test]
fn run_on_problem_file() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("problem.txt");
    std::fs::write(&problem, "0, 1, 0.9\n1, 2, 0.9\n2, 1 2, 0.4\n").unwrap();
    let o = dsclust(&["run", "--problem", p(&problem), "--mode", "fixed-k:2", "--max-iter", "5"]);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["partition"]["assignment"].as_array().unwrap().len(), 3);
}

#[test]
fn batch_prints_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = dsclust(&["batch", "--seeds", "2", "--max-iter", "10", "--out", p(dir.path())]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("mean iterations"));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["degenerate"], true);
    assert_eq!(summary["fixed_k"]["mean_iterations"], 10.0);
}

#[test]
fn errors_are_one_json_line() {
    let o = dsclust(&["eval", "--problem", "/does/not/exist", "--partition", "/nope"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_json(&o)["error"], "io");

    let o = dsclust(&["run", "--p", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_json(&o)["error"], "domain");

    let o = dsclust(&["run", "--domain-term", "sideways"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "usage");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0, 1, 0.5\n1, 9 x, 0.5\n").unwrap();
    let o = dsclust(&["run", "--problem", p(&bad)]);
    let e = error_json(&o);
    assert_eq!(e["error"], "parse");
    assert!(e["message"].as_str().unwrap().contains(":2:"));
}

#[test]
fn help_exits_zero() {
    let o = dsclust(&["--help"]);
    assert!(o.status.success());
    for sub in ["run", "batch", "gen", "eval"] {
        assert!(stdout(&o).contains(sub));
    }
    let o = dsclust(&["run", "--help"]);
    for flag in ["--seed", "--mode", "--p", "--columns", "--max-iter", "--trace-dir", "--domain-term"] {
        assert!(stdout(&o).contains(flag), "{flag}");
    }
}

use std::path::Path;
use std::process::{Command, Output};

fn run_in(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_thetakit"));
    cmd.args(args)
        .current_dir(dir)
        .env_remove("THETAKIT_BUDGET_MS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), args, &[])
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn theta_of_p3() {
    let o = run(&["theta", "--graph6", "Bw", "--L", "finite:1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn theta_out_of_budget_is_unknown() {
    let o = run(&[
        "theta",
        "--graph6",
        "Bw",
        "--L",
        "finite:1",
        "--max-nodes",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("unknown"));
}

#[test]
fn theta_uniform_nonexistence() {
    let o = run(&[
        "theta-uniform",
        "--graph6",
        "Bw",
        "--L",
        "finite:5",
        "--K",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("none"));
}

#[test]
fn minrank_values() {
    let o = run(&["minrank", "--graph6", "Bw", "--p", "2"]);
    assert_eq!(stdout(&o).trim(), "1");
    let o = run(&["bminrank", "--rows", "11,10", "--p", "3"]);
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn coefficients() {
    assert_eq!(
        stdout(&run(&["coeffs", "--p", "2", "--R", "1"])).trim(),
        "a: 1 1"
    );
    assert_eq!(
        stdout(&run(&["coeffs", "--p", "3", "--R", "1,2"])).trim(),
        "a: 2 1 2"
    );
}

#[test]
fn family_matrices() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("fam.txt"), "3 3\n1 2\n2 3\n1 3\n").unwrap();
    let o = run_in(
        dir.path(),
        &["incmat", "--family", "fam.txt", "--t", "1"],
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "rational 3 3\n1 1 0\n0 1 1\n1 0 1\nrank 3\n");
    let o = run_in(
        dir.path(),
        &["witness", "--family", "fam.txt", "--p", "2", "--R", "1"],
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "gf:2 3 3\n1 0 0\n0 1 0\n0 0 1\nrank 3\n");
}

#[test]
fn corpus_iso_count() {
    let o = run(&["corpus", "--n", "4", "--iso"]);
    assert_eq!(stdout(&o).lines().count(), 11);
}

#[test]
fn verify_clean_run() {
    let o = run(&[
        "verify",
        "--theorem",
        "C3.2i",
        "--p",
        "3",
        "--R",
        "1,2",
        "--n-max",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(
        out.lines().next(),
        Some("graph6,theorem,params,lhs,rhs,holds,slack,millis")
    );
    assert!(!out.contains(",false,"));
}

#[test]
fn verify_json_parses() {
    let o = run(&[
        "verify",
        "--theorem",
        "C3.2i",
        "--p",
        "3",
        "--R",
        "1,2",
        "--n-max",
        "3",
        "--format",
        "json",
    ]);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 1 + 2 + 8);
    assert!(rows.iter().all(|r| r["theorem"] == "C3.2i"));
    assert_eq!(rows[0]["graph6"], "@");
    assert!(rows[0]["millis"].is_null());
}

#[test]
fn verify_violation_writes_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &[
            "verify",
            "--theorem",
            "C4.2i",
            "--p",
            "3",
            "--R",
            "1,2",
            "--n-max",
            "2",
            "--repro-dir",
            "rp",
        ],
        &[],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).lines().last().unwrap().contains(",false,"));
    let bundle = dir.path().join("rp").join("C4.2i-A__1");
    assert!(bundle.join("row.json").is_file());
    assert!(bundle.join("graph.txt").is_file());
}

#[test]
fn usage_errors() {
    let o = run(&["frob"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
    let o = run(&["theta", "--graph6", "zzz", "--L", "finite:1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&[
        "verify",
        "--theorem",
        "T1.1",
        "--L",
        "finite:1",
        "--k",
        "0",
        "--n-max",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_budget_env() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &[
            "verify",
            "--theorem",
            "C3.2i",
            "--p",
            "3",
            "--R",
            "1,2",
            "--n-max",
            "3",
        ],
        &[("THETAKIT_BUDGET_MS", "abc")],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("THETAKIT_BUDGET_MS"));
}

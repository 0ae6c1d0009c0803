use std::path::PathBuf;
use std::process::{Command, Output};

use dmc_cli::parse_program;

fn program(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("programs")
        .join(name)
}

fn dmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmc"))
        .args(args)
        .env_remove("DMC_FUEL")
        .env_remove("DMC_JSON")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_pred_13() {
    let o = dmc(&["run", program("pred.dmc").to_str().unwrap(), "pred", "13"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "6\n");
}

#[test]
fn classify_one_minimization() {
    let o = dmc(&["classify", program("one_min.dmc").to_str().unwrap(), "f"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).trim(),
        "level 1 → class P^Σ_1 membership bound: □ᴾ_2"
    );
}

#[test]
fn unsafe_codomain_is_rejected() {
    let o = dmc(&["check", program("unsafe_srr.dmc").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("SafeCodomainViolation"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn check_runs_directives() {
    let o = dmc(&["check", program("one_min.dmc").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("f 7 = 3"), "{out}");
    assert!(out.contains("len 1000 = 10"), "{out}");
}

#[test]
fn fuel_exhaustion_exits_2() {
    let file = program("one_min.dmc");
    let o = dmc(&["run", file.to_str().unwrap(), "f", "1000", "--fuel", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "fuel exhausted after 5 steps\n");
    let o = Command::new(env!("CARGO_BIN_EXE_dmc"))
        .args(["run", file.to_str().unwrap(), "f", "1000"])
        .env("DMC_FUEL", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bound_makes_searches_total() {
    let file = program("one_min.dmc");
    let o = dmc(&["run", file.to_str().unwrap(), "f", "1000", "--bound", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn json_output() {
    let o = dmc(&[
        "run",
        program("pred.dmc").to_str().unwrap(),
        "pred",
        "13",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["display"], "6");
    let o = dmc(&["verify-model", "--levels", "5", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["flagged"].as_array().unwrap().len(), 2);
}

#[test]
fn table_marks_flagged_cells() {
    let o = dmc(&["table", "--levels", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().nth(1).unwrap().starts_with("M_0^S"));
    assert_eq!(out.matches("[!]").count(), 4, "{out}");
}

#[test]
fn diagrams_on_small_samples() {
    let o = dmc(&["verify-diagrams", "--samples", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("ok")).count(),
        5
    );
}

#[test]
fn usage_and_parse_errors_exit_1() {
    assert_eq!(dmc(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(dmc(&["--levels", "0", "table"]).status.code(), Some(1));
    let dir = std::env::temp_dir().join(format!("dmc-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.dmc");
    std::fs::write(&bad, "(def f (arrow Top Top)\n  (id Top)").unwrap();
    let o = dmc(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.dmc:"), "{}", stderr(&o));
    let o = dmc(&["run", program("pred.dmc").to_str().unwrap(), "nothing"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn every_program_round_trips() {
    for entry in std::fs::read_dir(program("")).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "dmc") {
            let src = std::fs::read_to_string(&path).unwrap();
            let parsed = parse_program(&src).unwrap();
            assert_eq!(
                parse_program(&parsed.to_string()).unwrap(),
                parsed,
                "{}",
                path.display()
            );
        }
    }
}

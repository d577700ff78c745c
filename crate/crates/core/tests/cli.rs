use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rbcsp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbcsp"))
        .current_dir(dir)
        .env_remove("RBCSP_OUT_DIR")
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_exit_codes_distinguish_verdicts() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    assert!(rbcsp(dir, &["gen", "--n", "12", "--p", "0.1", "--forced", "--seed", "1", "-o", "sat.rbcsp"]).status.success());
    assert!(rbcsp(dir, &["gen", "--n", "12", "--p", "0.5", "--seed", "1", "-o", "unsat.rbcsp"]).status.success());

    let sat = rbcsp(dir, &["solve", "sat.rbcsp"]);
    assert_eq!(sat.status.code(), Some(10));
    assert!(stdout(&sat).starts_with("s SAT\nv "));
    assert_eq!(rbcsp(dir, &["solve", "sat.rbcsp", "--method", "tabu"]).status.code(), Some(10));

    let unsat = rbcsp(dir, &["solve", "unsat.rbcsp"]);
    assert_eq!(unsat.status.code(), Some(20));
    let timeout = rbcsp(dir, &["solve", "unsat.rbcsp", "--method", "tabu", "--max-flips", "50"]);
    assert_eq!(timeout.status.code(), Some(30));
    let limited = rbcsp(dir, &["solve", "sat.rbcsp", "--count", "--node-limit", "1"]);
    assert_eq!(limited.status.code(), Some(30));

    let missing = rbcsp(dir, &["solve", "nope.rbcsp"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn gen_and_encode_are_byte_stable() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let args = ["gen", "--k", "3", "--n", "10", "--alpha", "0.7", "--r", "1", "--p", "0.3", "--model", "rd", "--seed", "5"];
    let a = rbcsp(dir, &args);
    let b = rbcsp(dir, &args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    fs::write(dir.join("i.rbcsp"), &a.stdout).unwrap();

    let cnf = rbcsp(dir, &["encode", "i.rbcsp"]);
    let text = stdout(&cnf);
    assert!(text.contains("c params model=RD k=3 n=10"));
    assert!(text.lines().any(|l| l.starts_with("p cnf ")));
    assert_eq!(cnf.stdout, rbcsp(dir, &["encode", "i.rbcsp"]).stdout);
    let no_amo = stdout(&rbcsp(dir, &["encode", "i.rbcsp", "--no-amo"]));
    assert!(no_amo.lines().count() < text.lines().count());
}

#[test]
fn config_file_stands_in_for_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::write(
        dir.join("run.cfg"),
        "rbcsp-config 1\n# sweep setup\nn = 12\nvary = p\nvalues = 0.2, 0.3\nsamples = 4\nseed = 9\nforced = false\n",
    )
    .unwrap();
    let from_cfg = rbcsp(dir, &["sweep", "--config", "run.cfg", "-o", "-"]);
    assert!(from_cfg.status.success(), "{}", String::from_utf8_lossy(&from_cfg.stderr));
    let from_flags = rbcsp(
        dir,
        &["sweep", "--n", "12", "--values", "0.2,0.3", "--samples", "4", "--seed", "9", "-o", "-"],
    );
    assert_eq!(from_cfg.stdout, from_flags.stdout);
    assert_eq!(stdout(&from_cfg).lines().count(), 3);

    // command-line flags win over the file
    let overridden = rbcsp(dir, &["sweep", "--config", "run.cfg", "--values", "0.25", "-o", "-"]);
    assert_eq!(stdout(&overridden).lines().count(), 2);

    fs::write(dir.join("old.cfg"), "rbcsp-config 2\nn = 12\n").unwrap();
    assert_eq!(rbcsp(dir, &["sweep", "--config", "old.cfg"]).status.code(), Some(2));
    fs::write(dir.join("bad.cfg"), "rbcsp-config 1\nn 12\n").unwrap();
    assert_eq!(rbcsp(dir, &["sweep", "--config", "bad.cfg"]).status.code(), Some(2));
}

#[test]
fn output_directory_comes_from_the_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let out = Command::new(env!("CARGO_BIN_EXE_rbcsp"))
        .current_dir(dir)
        .env("RBCSP_OUT_DIR", "results")
        .args(["survival", "--n", "12", "--runs", "20"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.join("results/survival.csv")).unwrap();
    assert!(csv.starts_with("x,survival\n0,"));

    // an explicit directory beats the environment
    let out = Command::new(env!("CARGO_BIN_EXE_rbcsp"))
        .current_dir(dir)
        .env("RBCSP_OUT_DIR", "results")
        .args(["growth", "--ns", "10,12", "--samples", "3", "--out-dir", "elsewhere"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.join("elsewhere/growth.csv").exists());
}

#[test]
fn analyze_reports_thresholds_and_profiles() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let out = rbcsp(dir, &["analyze", "--alpha", "1", "--r", "1", "--p", "0.3", "--grid", "40", "--profile", "prof.csv"]);
    let text = stdout(&out);
    assert!(text.contains("p_cr 0.632121"));
    let csv = fs::read_to_string(dir.join("prof.csv")).unwrap();
    assert!(csv.starts_with("delta,forced_exponent,unforced_exponent\n"));
    // 39 intervals over n = 30 are refined to 60
    assert_eq!(csv.lines().count(), 62);
}

#[test]
fn threshold_writes_a_difference_table() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let out = rbcsp(dir, &["threshold", "--n", "10", "--samples", "10", "--tolerance", "0.05", "-o", "-"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("value,p_cr,p_hat,difference,evaluations\n10,0.234072,"));
}

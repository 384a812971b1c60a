use std::path::PathBuf;
use std::process::{Command, Output};

use qck_core::positivity::PositivityRecord;
use qck_core::VerificationReport;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn qck(args: &[&str]) -> Output {
    qck_env(args, &[])
}

fn qck_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qck"));
    cmd.args(args).env_remove("QCK_MAX_TERMS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn qck")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn clausen_suite_json_passes_and_round_trips() {
    let o = qck(&["verify", "--suite", "clausen", "--nmax", "4", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let reports: Vec<VerificationReport> = serde_json::from_str(&text).unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r.passed && r.difference == "0"));
    assert_eq!(serde_json::to_string_pretty(&reports).unwrap() + "\n", text);
}

#[test]
fn congruence_suite_for_one_prime() {
    let o = qck(&["verify", "--suite", "congruence", "--p", "3", "--mmax", "9"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS thm2(m=9, p=3)"));
}

#[test]
fn manifest_runs_in_file_order() {
    let path = fixture("manifest_small.json");
    let o = qck(&["verify", "--manifest", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let reports: Vec<VerificationReport> = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = reports.iter().map(|r| r.case.name.as_str()).collect();
    assert_eq!(names, ["clausen_orr", "general_s", "special222", "lemma_am2", "delannoy", "thm2", "thm3_2", "lemma41"]);
}

#[test]
fn corrupted_identity_exits_one_with_difference() {
    let o = qck(&[
        "verify",
        "--suite",
        "all",
        "--nmax",
        "2",
        "--p",
        "3",
        "--mmax",
        "2",
        "--inject-fault",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 1);
    let reports: Vec<VerificationReport> = serde_json::from_str(&stdout(&o)).unwrap();
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|r| r.difference != "0" && !r.difference.is_empty()));
    assert!(stderr(&o).starts_with("first failure: clausen_orr(n=0): difference "), "{}", stderr(&o));

    let path = fixture("manifest_small.json");
    let o = qck(&["verify", "--manifest", path.to_str().unwrap(), "--inject-fault"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL clausen_orr(n=2)\n  difference: "));
}

#[test]
fn usage_errors_exit_two() {
    let cases: Vec<Vec<String>> = vec![
        vec!["verify".into(), "--suite".into(), "nope".into()],
        vec!["verify".into(), "--nmax".into(), "11".into()],
        vec!["verify".into(), "--suite".into(), "congruence".into(), "--p".into(), "17".into()],
        vec!["verify".into(), "--suite".into(), "congruence".into(), "--p".into(), "9".into()],
        vec!["verify".into(), "--rmax".into(), "4".into()],
        vec!["frobnicate".into()],
        vec!["delannoy".into(), "--m".into(), "-1".into(), "--n".into(), "2".into()],
        vec!["delannoy".into(), "--m".into(), "2".into(), "--n".into(), "2".into(), "--q-analogue".into(), "dx".into()],
        vec!["congruence".into(), "--p".into(), "4".into()],
        vec!["positivity".into(), "--rmax".into(), "0".into()],
        vec!["phi".into(), "phi[2,1]{a, b ; c ; q}".into()],
    ];
    for fixture_name in [
        "manifest_malformed.json",
        "manifest_unknown_case.json",
        "manifest_bad_params.json",
        "manifest_wrong_free_vars.json",
    ] {
        let o = qck(&["verify", "--manifest", fixture(fixture_name).to_str().unwrap()]);
        assert_eq!(code(&o), 2, "{fixture_name}: {}", stderr(&o));
    }
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = qck(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
    }
    let o = qck(&["verify", "--manifest", "/nonexistent/manifest.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn malformed_manifest_reports_position() {
    let o = qck(&["verify", "--manifest", fixture("manifest_malformed.json").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3 column"), "{}", stderr(&o));
}

#[test]
fn phi_examples() {
    let o = qck(&["phi", "phi[2,1]{a, q^-0 ; c ; q}"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "1\n"));
    // (c/a;q)_2 a^2 / (c;q)_2
    let o = qck(&["phi", "phi[2,1]{a, q^-2 ; c ; q}"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "(-a*c + a^2 + q*c^2 - q*a*c) / (1 - c - q*c + q*c^2)\n");
    let o = qck(&["phi", "phi[2,1]{a, q^-2 ; c ; q"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 1, column 25"), "{}", stderr(&o));
    let o = qck(&["phi", "phi[1,0]{q^-3 ; ; x}", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["denominator"], "1");
}

#[test]
fn delannoy_examples() {
    for (args, want) in [
        (["--m", "2", "--n", "2", "--q-analogue", "plain"], "13\n"),
        (["--m", "3", "--n", "3", "--q-analogue", "plain"], "63\n"),
        (["--m", "1", "--n", "1", "--q-analogue", "dq"], "2 + q\n"),
        (["--m", "1", "--n", "1", "--q-analogue", "dqstar"], "1 + 2*q\n"),
        (["--m", "0", "--n", "5", "--q-analogue", "dqstar"], "1\n"),
    ] {
        let mut full = vec!["delannoy"];
        full.extend(args);
        let o = qck(&full);
        assert_eq!((code(&o), stdout(&o).as_str()), (0, want), "{args:?}");
    }
    let o = qck(&["delannoy", "--m", "1", "--n", "2", "--format", "csv"]);
    assert_eq!(stdout(&o), "m\\n,0,1,2\n0,1,1,1\n1,1,3,5\n");
}

#[test]
fn congruence_records() {
    let o = qck(&["congruence", "--p", "3", "--mmax", "9", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.len(), 9);
    let cases: Vec<&str> = v.iter().map(|r| r["case"].as_str().unwrap()).collect();
    assert_eq!(cases, ["other", "minus_one", "zero", "other", "minus_one", "zero", "other", "minus_one", "zero"]);
    assert!(v.iter().all(|r| r["passed"] == true && r["p"] == 3));
}

#[test]
fn positivity_records() {
    let o = qck(&["positivity", "--mmax", "3", "--nmax", "3", "--rmax", "2", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let records: Vec<PositivityRecord> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(records.len(), 3 * 3 * 3 * 2);
    assert!(records.iter().all(|r| r.passed()));
    let v: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[1]["claim"], "thm3-2");
    let o = qck(&["positivity", "--mmax", "2", "--nmax", "2", "--rmax", "1", "--format", "csv"]);
    assert!(
        stdout(&o).starts_with("claim,m,n,r,divisible,nonneg,min_coeff,degree_range\nthm3-1,1,1,1,true,true,1,0..0\n")
    );
}

#[test]
fn parallel_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for (i, extra) in [&[][..], &["--parallel"][..], &["--parallel"][..]].iter().enumerate() {
        let out = dir.path().join(format!("r{i}.json"));
        let mut args = vec![
            "verify", "--suite", "all", "--nmax", "3", "--p", "3,5", "--mmax", "4", "--seed", "11", "--format", "json",
        ];
        args.extend(extra.iter());
        args.extend(["--out", out.to_str().unwrap()]);
        let o = qck(&args);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        assert!(o.stdout.is_empty());
        bodies.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
    assert_eq!(bodies[1], bodies[2]);
    for fmt in ["text", "csv"] {
        let a = qck(&["verify", "--suite", "positivity", "--nmax", "3", "--format", fmt]);
        let b = qck(&["verify", "--suite", "positivity", "--nmax", "3", "--format", fmt, "--parallel"]);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn seed_adds_spot_checks() {
    let a = qck(&["verify", "--suite", "transforms", "--nmax", "1", "--seed", "3"]);
    let b = qck(&["verify", "--suite", "transforms", "--nmax", "1", "--seed", "4"]);
    assert_eq!((code(&a), code(&b)), (0, 0));
    assert!(stdout(&a).contains("PASS phi_permutation(index=7, seed=3)"));
    let plain = qck(&["verify", "--suite", "transforms", "--nmax", "1"]);
    assert!(!stdout(&plain).contains("phi_permutation"));
}

#[test]
fn term_limit_aborts_gracefully() {
    let o = qck_env(&["verify", "--suite", "clausen", "--nmax", "3"], &[("QCK_MAX_TERMS", "20")]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.starts_with("aborted: term limit exceeded"), "{err}");
    assert!(!err.contains("panicked"));
    let o = qck_env(&["delannoy", "--m", "1", "--n", "1"], &[("QCK_MAX_TERMS", "many")]);
    assert_eq!(code(&o), 2);
}

#[test]
fn unsafe_bounds_lifts_caps() {
    let o = qck(&["delannoy", "--m", "11", "--n", "0"]);
    assert_eq!(code(&o), 2);
    let o = qck(&["delannoy", "--m", "11", "--n", "0", "--unsafe-bounds"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "1\n"));
}

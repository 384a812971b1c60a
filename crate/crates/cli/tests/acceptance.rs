//! One PASS/FAIL line per acceptance criterion, written straight to stderr so
//! it shows without `--nocapture`.

use std::collections::BTreeSet;
use std::io::Write;
use std::panic::catch_unwind;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use qck_core::congruence::{thm2_lhs_direct, thm2_lhs_single_sum, verify_minus_q_pochhammer, verify_thm2, Thm2Case};
use qck_core::delannoy::{dq, dq_alt, dq_star, dq_star_alt, product_expansion};
use qck_core::exactalg::{BigRat, MultiLaurentPoly, Ring};
use qck_core::identities::*;
use qck_core::positivity::{lemma41_generic, positivity_record, verify_alternating_sum, verify_schmidt, Thm3Claim};
use qck_core::qkit::{check_qbinomial_theorem, check_qchu_vandermonde};
use qck_core::VerificationReport;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn all_pass(reports: impl IntoIterator<Item = VerificationReport>) -> Outcome {
    let mut count = 0;
    for r in reports {
        if !r.passed {
            return Err(format!("{} failed: difference {}", r.case, r.difference));
        }
        count += 1;
    }
    Ok(format!("{count} cases"))
}

fn ok(r: qck_core::Result<VerificationReport>) -> VerificationReport {
    r.expect("admissible parameters")
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let t = start.elapsed();
    if t > limit {
        return Err(format!("{detail} but took {:.1}s > {}s", t.as_secs_f64(), limit.as_secs()));
    }
    Ok(format!("{detail}, {:.1}s", t.as_secs_f64()))
}

fn clausen_core() -> Outcome {
    let start = Instant::now();
    let detail = all_pass((0..=6).map(verify_clausen_orr))?;
    within(Duration::from_secs(60), start, detail)
}

fn corollaries() -> Outcome {
    all_pass((0..=6).map(verify_final_square).chain((0..=3).map(verify_sqrt_corollary)))
}

fn product_transforms() -> Outcome {
    all_pass((0..=6).map(verify_special3).chain((0..=6).map(verify_special222)))
}

fn shifted() -> Outcome {
    let mut reports = Vec::new();
    for n in 0..=5 {
        for s in 0..=n {
            reports.push(ok(verify_general_s(n, s)));
            reports.push(ok(verify_special3_shifted(n, s)));
        }
    }
    all_pass(reports)
}

fn lemmas() -> Outcome {
    let mut reports = Vec::new();
    for n in 1..=5 {
        for m in 0..n {
            for h in 1..=n - m {
                reports.push(ok(verify_lemma_last(n, m, h)));
                reports.push(ok(verify_lemma_am2(n, m, h)));
            }
        }
    }
    reports.extend((1..=6).map(|n| ok(verify_lem_important2(n))));
    for n in 0..=4 {
        for m in 0..=n {
            reports.push(ok(connection_coefficients(n, m)));
        }
    }
    all_pass(reports)
}

/// Lattice paths to `(n, m)` with east, north and diagonal steps.
fn path_count(m: usize, n: usize) -> BigInt {
    let mut grid = vec![vec![BigInt::from(0); n + 1]; m + 1];
    for i in 0..=m {
        for j in 0..=n {
            grid[i][j] = if i == 0 || j == 0 {
                BigInt::from(1)
            } else {
                &grid[i - 1][j] + &grid[i][j - 1] + &grid[i - 1][j - 1]
            };
        }
    }
    grid[m][n].clone()
}

fn delannoy() -> Outcome {
    if path_count(2, 2) != BigInt::from(13) || path_count(3, 3) != BigInt::from(63) {
        return Err("path-count oracle disagrees with D(2,2) = 13, D(3,3) = 63".into());
    }
    let mut cells = 0;
    for m in 0..=8 {
        for n in 0..=8 {
            let (a, b) = (dq(m, n), dq_star(m, n));
            if a != dq_alt(m, n) || b != dq_star_alt(m, n) {
                return Err(format!("alternative sums differ at ({m}, {n})"));
            }
            let want =
                MultiLaurentPoly::constant(BigRat::from_bigint(path_count(m as usize, n as usize)), Ring::q_only());
            if a.at_q_one() != want || b.at_q_one() != want {
                return Err(format!("q = 1 value differs from the path count at ({m}, {n})"));
            }
            let r = product_expansion(m, n);
            if !r.passed {
                return Err(format!("{} failed: difference {}", r.case, r.difference));
            }
            cells += 1;
        }
    }
    Ok(format!("{cells} cells"))
}

fn congruences() -> Outcome {
    let start = Instant::now();
    let mut reports = Vec::new();
    let mut cases = BTreeSet::new();
    for p in [3u64, 5, 7, 11, 13] {
        reports.push(ok(verify_minus_q_pochhammer(p)));
        for m in 1..=3 * p as i64 {
            reports.push(ok(verify_thm2(p, m)));
            cases.insert(format!("{}", Thm2Case::of(p, m)));
        }
    }
    if cases.len() != 3 {
        return Err(format!("only the cases {cases:?} were reached"));
    }
    for p in [3u64, 5, 7] {
        for m in 1..=10 {
            let (a, b) = (thm2_lhs_direct(p, m).unwrap(), thm2_lhs_single_sum(p, m).unwrap());
            if a != b {
                return Err(format!("left-hand routes differ at p={p}, m={m}"));
            }
        }
    }
    let detail = all_pass(reports)?;
    within(Duration::from_secs(300), start, format!("{detail}, all three cases, routes agree"))
}

fn positivity() -> Outcome {
    let mut cells = 0;
    for r in 1..=3u32 {
        let top = if r == 3 { 4 } else { 6 };
        for m in 1..=top {
            for n in 1..=top {
                for claim in Thm3Claim::ALL {
                    let rec = positivity_record(claim, m, n, r).unwrap();
                    if !rec.divisible || !rec.nonneg {
                        return Err(format!("{claim} at m={m}, n={n}, r={r}: {rec:?}"));
                    }
                    cells += 1;
                }
            }
        }
    }
    let mut reports = Vec::new();
    for k in 0..=6 {
        for i in 0..=k {
            for j in 0..=k {
                reports.push(ok(verify_schmidt(k, i, j)));
            }
        }
    }
    for n in 1..=6 {
        for s in 0..n {
            reports.push(ok(verify_alternating_sum(n, s)));
        }
    }
    for n in 1..=4 {
        for r in 1..=2 {
            reports.push(ok(lemma41_generic(n, r)));
        }
    }
    let detail = all_pass(reports)?;
    Ok(format!("{cells} positivity cells, {detail}"))
}

fn classical() -> Outcome {
    all_pass((0..=8).map(check_qbinomial_theorem).chain((0..=8).map(check_qchu_vandermonde)))
}

fn qck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qck")).args(args).env_remove("QCK_MAX_TERMS").output().expect("spawn qck")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

fn cli_contract() -> Outcome {
    let expect = |args: &[&str], code: i32| -> Result<Output, String> {
        let o = qck(args);
        match o.status.code() {
            Some(c) if c == code => Ok(o),
            c => Err(format!("{args:?} exited with {c:?}, expected {code}")),
        }
    };
    expect(&["verify", "--suite", "clausen", "--nmax", "4", "--format", "json"], 0)?;
    expect(&["verify", "--suite", "congruence", "--p", "3", "--mmax", "9"], 0)?;
    expect(&["verify", "--manifest", &fixture("manifest_small.json")], 0)?;
    expect(&["verify", "--manifest", &fixture("manifest_malformed.json")], 2)?;
    expect(&["verify", "--manifest", &fixture("manifest_unknown_case.json")], 2)?;
    expect(&["verify", "--nmax", "11"], 2)?;
    expect(&["phi", "phi[2,1]{a, q^-2 ; c"], 2)?;
    let o = expect(&["verify", "--suite", "all", "--nmax", "2", "--p", "3", "--inject-fault", "--format", "json"], 1)?;
    let reports: Vec<VerificationReport> = serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())?;
    match reports.iter().find(|r| !r.passed) {
        Some(r) if r.difference != "0" && !r.difference.is_empty() => {}
        _ => return Err("corrupted run has no failing report with a nonzero difference".into()),
    }
    let base = ["verify", "--suite", "all", "--nmax", "3", "--p", "3,5", "--seed", "9", "--format", "json"];
    let seq = expect(&base, 0)?;
    let mut par_args = base.to_vec();
    par_args.push("--parallel");
    let par = expect(&par_args, 0)?;
    if seq.stdout != par.stdout || seq.stdout.is_empty() {
        return Err("sequential and parallel reports differ".into());
    }
    Ok("exit codes 0/1/2, byte-identical parallel report, corrupted fixture fails".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, Check); 10] = [
        ("Clausen-Orr product formula, n <= 6", clausen_core),
        ("final-square and square-root corollaries", corollaries),
        ("special3 and special222 transformations, n <= 6", product_transforms),
        ("shifted forms, s <= n <= 5", shifted),
        ("double-sum lemmas and connection coefficients", lemmas),
        ("q-Delannoy sums, product expansion, q = 1 values", delannoy),
        ("supercongruence modulo [p]^2", congruences),
        ("divisibility and positivity", positivity),
        ("q-binomial theorem and q-Chu-Vandermonde, n <= 8", classical),
        ("CLI contract", cli_contract),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr().lock();
    for (i, (title, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let (verdict, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => ("FAIL", e.clone()),
        };
        writeln!(err, "{verdict} {:>2}. {title}: {detail}", i + 1).unwrap();
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "criteria {failed:?} failed");
}

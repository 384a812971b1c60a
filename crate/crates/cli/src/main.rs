//! `qck`: run verification suites and print q-series tables.

mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qck_core::congruence::{verify_thm2, Thm2Case};
use qck_core::delannoy::{Analogue, DelannoyTable};
use qck_core::exactalg::{set_max_terms, TermLimitExceeded, DEFAULT_MAX_TERMS};
use qck_core::hyperg::{parse_phi, phi_sum_frac};
use qck_core::par::{map_ordered, Execution};
use qck_core::positivity::{positivity_record, PositivityRecord, Thm3Claim};
use qck_core::suite::{catch_term_limit, parse_manifest, run_cases, Bounds, SuiteConfig, SuiteKind, CAP_N};
use qck_core::{QckError, VerificationReport};

use render::Format;

#[derive(Parser, Debug)]
#[command(
    name = "qck",
    version,
    about = "Exact verification of q-series identities, q-Delannoy congruences and positivity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Fan independent cases out to a worker pool.
    #[arg(long, global = true)]
    parallel: bool,
    /// Seed for randomized spot checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Allow grid bounds beyond the hard caps.
    #[arg(long, global = true)]
    unsafe_bounds: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite or a manifest of cases.
    Verify(VerifyArgs),
    /// Sum a terminating series, e.g. `phi[2,1]{a, q^-2 ; c ; q}`.
    Phi { expr: String },
    /// Print a Delannoy value (text, json) or the table up to (m, n) (csv).
    Delannoy {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(long, value_enum, default_value_t = Kind::Plain)]
        q_analogue: Kind,
    },
    /// Check the supercongruence for one prime over 1 <= m <= mmax.
    Congruence {
        #[arg(long)]
        p: u64,
        /// Defaults to 3p.
        #[arg(long)]
        mmax: Option<i64>,
    },
    /// Divisibility and coefficient positivity over a grid.
    Positivity {
        #[arg(long, default_value_t = 6)]
        mmax: i64,
        #[arg(long, default_value_t = 6)]
        nmax: i64,
        #[arg(long, default_value_t = 2)]
        rmax: u32,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_suite, conflicts_with = "manifest")]
    suite: Option<SuiteKind>,
    #[arg(long)]
    nmax: Option<i64>,
    #[arg(long)]
    mmax: Option<i64>,
    /// Restrict the congruence grid to these primes.
    #[arg(long, value_delimiter = ',')]
    p: Vec<u64>,
    #[arg(long)]
    rmax: Option<u32>,
    /// JSON list of `{name, params, free_vars}` to run instead of a suite.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Shift the first zero test of every case by 1.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Plain,
    Dq,
    Dqstar,
    Product,
}

fn parse_suite(s: &str) -> Result<SuiteKind, String> {
    s.parse().map_err(|e: QckError| e.to_string())
}

/// One line of `congruence` output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceRecord {
    pub p: u64,
    pub m: i64,
    pub case: Thm2Case,
    pub passed: bool,
}

enum Failure {
    Usage(String),
    Math(String),
}

impl From<QckError> for Failure {
    fn from(e: QckError) -> Self {
        match e {
            QckError::TermLimit { .. } => Failure::Usage(format!("aborted: {e}; raise QCK_MAX_TERMS to continue")),
            QckError::Parse { .. } => Failure::Usage(e.to_string()),
            e => Failure::Usage(format!("error: {e}")),
        }
    }
}

type CmdResult = Result<(String, Option<String>), Failure>;

fn main() -> ExitCode {
    let default_hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(move |info| {
        if info.payload().downcast_ref::<TermLimitExceeded>().is_none() {
            default_hook(info);
        }
    }));
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(Failure::Math(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    match std::env::var("QCK_MAX_TERMS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => set_max_terms(n),
            _ => return Err(Failure::Usage(format!("error: QCK_MAX_TERMS must be a positive integer, got `{v}`"))),
        },
        Err(_) => set_max_terms(DEFAULT_MAX_TERMS),
    }
    let exec = Execution::from_flag(cli.parallel);
    let (body, failure) = match &cli.command {
        Command::Verify(args) => verify(cli, args, exec)?,
        Command::Phi { expr } => phi(cli, expr)?,
        Command::Delannoy { m, n, q_analogue } => delannoy(cli, *m, *n, *q_analogue)?,
        Command::Congruence { p, mmax } => congruence(cli, *p, *mmax, exec)?,
        Command::Positivity { mmax, nmax, rmax } => positivity(cli, *mmax, *nmax, *rmax, exec)?,
    };
    emit(cli, &body)?;
    match failure {
        Some(msg) => Err(Failure::Math(msg)),
        None => Ok(ExitCode::SUCCESS),
    }
}

fn emit(cli: &Cli, body: &str) -> Result<(), Failure> {
    let written = match &cli.out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    };
    written.map_err(|e| Failure::Usage(format!("error: cannot write report: {e}")))
}

fn verify(cli: &Cli, args: &VerifyArgs, exec: Execution) -> CmdResult {
    let cases = match &args.manifest {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("error: cannot read {}: {e}", path.display())))?;
            parse_manifest(&text).map_err(|e| match e {
                QckError::Parse { message, .. } => Failure::Usage(format!("{}: {message}", path.display())),
                e => e.into(),
            })?
        }
        None => {
            let bounds = Bounds {
                nmax: args.nmax,
                mmax: args.mmax,
                primes: (!args.p.is_empty()).then(|| args.p.clone()),
                rmax: args.rmax,
            };
            let config = SuiteConfig {
                suite: args.suite.unwrap_or(SuiteKind::All),
                bounds,
                execution: exec,
                seed: cli.seed,
                unsafe_bounds: cli.unsafe_bounds,
            };
            config.cases()?
        }
    };
    let mut reports = qck_core::report::with_fault_injection(args.inject_fault, || run_cases(&cases, exec))?;
    for r in &mut reports {
        r.elapsed = Duration::ZERO;
    }
    let failure = reports.iter().find(|r| !r.passed).map(first_failure);
    Ok((render::reports(&reports, cli.format), failure))
}

fn first_failure(r: &VerificationReport) -> String {
    format!("first failure: {}: difference {}", r.case, r.difference)
}

fn phi(cli: &Cli, expr: &str) -> CmdResult {
    let spec = parse_phi(expr).map_err(|e| match e {
        QckError::Parse { offset, message } => {
            let (line, col) = line_col(expr, offset);
            Failure::Usage(format!("parse error at line {line}, column {col}: {message}"))
        }
        e => e.into(),
    })?;
    let frac = catch_term_limit(|| phi_sum_frac(&spec)?.reduce())?;
    let den = frac.expand_den()?;
    let out =
        render::PhiOutput { spec: spec.to_string(), numerator: frac.num.to_string(), denominator: den.to_string() };
    Ok((render::phi(&out, cli.format), None))
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn check_order(cli: &Cli, name: &str, v: i64, min: i64, cap: i64) -> Result<(), Failure> {
    if v < min {
        return Err(Failure::Usage(format!("error: --{name} must be at least {min}, got {v}")));
    }
    if v > cap && !cli.unsafe_bounds {
        return Err(Failure::Usage(format!(
            "error: --{name}={v} exceeds the cap {cap}; pass --unsafe-bounds to override"
        )));
    }
    Ok(())
}

fn delannoy(cli: &Cli, m: i64, n: i64, kind: Kind) -> CmdResult {
    check_order(cli, "m", m, 0, CAP_N)?;
    check_order(cli, "n", n, 0, CAP_N)?;
    let analogue = match kind {
        Kind::Plain => Analogue::Plain,
        Kind::Dq => Analogue::Dq,
        Kind::Dqstar => Analogue::DqStar,
        Kind::Product => Analogue::Product,
    };
    let table = catch_term_limit(|| Ok(DelannoyTable::build(analogue, m, n)))?;
    Ok((render::delannoy(&table, kind, cli.format), None))
}

fn congruence(cli: &Cli, p: u64, mmax: Option<i64>, exec: Execution) -> CmdResult {
    let bounds = Bounds { primes: Some(vec![p]), mmax, ..Bounds::default() };
    bounds.validate(cli.unsafe_bounds)?;
    let mmax = mmax.unwrap_or(3 * p as i64);
    let ms: Vec<i64> = (1..=mmax).collect();
    let results = map_ordered(exec, &ms, |&m| catch_term_limit(|| verify_thm2(p, m)));
    let mut records = Vec::new();
    let mut failure = None;
    for (m, r) in ms.iter().zip(results) {
        let r = r?;
        if !r.passed && failure.is_none() {
            failure = Some(first_failure(&r));
        }
        records.push(CongruenceRecord { p, m: *m, case: Thm2Case::of(p, *m), passed: r.passed });
    }
    Ok((render::congruence(&records, cli.format), failure))
}

fn positivity(cli: &Cli, mmax: i64, nmax: i64, rmax: u32, exec: Execution) -> CmdResult {
    check_order(cli, "mmax", mmax, 1, CAP_N)?;
    check_order(cli, "nmax", nmax, 1, CAP_N)?;
    Bounds { rmax: Some(rmax), ..Bounds::default() }.validate(cli.unsafe_bounds)?;
    let mut cells = Vec::new();
    for r in 1..=rmax {
        for m in 1..=mmax {
            for n in 1..=nmax {
                cells.extend(Thm3Claim::ALL.iter().map(|&c| (c, m, n, r)));
            }
        }
    }
    let records: Vec<PositivityRecord> =
        map_ordered(exec, &cells, |&(c, m, n, r)| catch_term_limit(|| positivity_record(c, m, n, r)))
            .into_iter()
            .collect::<Result<_, _>>()?;
    let failure = records.iter().find(|r| !r.passed()).map(|r| {
        format!("first failure: {} m={} n={} r={}: min coefficient {:?}", r.claim, r.m, r.n, r.r, r.min_coeff)
    });
    Ok((render::positivity(&records, cli.format), failure))
}

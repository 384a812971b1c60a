use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use qck_core::delannoy::DelannoyTable;
use qck_core::positivity::PositivityRecord;
use qck_core::VerificationReport;

use crate::{CongruenceRecord, Kind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiOutput {
    pub spec: String,
    pub numerator: String,
    pub denominator: String,
}

#[derive(Serialize)]
struct DelannoyValue<'a> {
    m: i64,
    n: i64,
    q_analogue: Kind,
    value: &'a str,
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn csv<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn params(r: &VerificationReport) -> String {
    r.case.meta_params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

pub fn reports(reports: &[VerificationReport], format: Format) -> String {
    match format {
        Format::Json => json(reports),
        Format::Csv => csv(
            &["case", "params", "passed", "difference", "note"],
            reports.iter().map(|r| {
                [
                    r.case.name.clone(),
                    params(r),
                    r.passed.to_string(),
                    r.difference.clone(),
                    r.note.clone().unwrap_or_default(),
                ]
            }),
        ),
        Format::Text => {
            let mut out = String::new();
            for r in reports {
                if r.passed {
                    out += &format!("PASS {}\n", r.case);
                } else {
                    out += &format!("FAIL {}\n  difference: {}\n", r.case, r.difference);
                    if let Some(note) = &r.note {
                        out += &format!("  note: {note}\n");
                    }
                }
            }
            let passed = reports.iter().filter(|r| r.passed).count();
            out += &format!("{passed}/{} passed\n", reports.len());
            out
        }
    }
}

pub fn phi(out: &PhiOutput, format: Format) -> String {
    match format {
        Format::Json => json(out),
        Format::Csv => csv(&["spec", "numerator", "denominator"], [[&out.spec, &out.numerator, &out.denominator]]),
        Format::Text if out.denominator == "1" => format!("{}\n", out.numerator),
        Format::Text => format!("({}) / ({})\n", out.numerator, out.denominator),
    }
}

pub fn delannoy(table: &DelannoyTable, kind: Kind, format: Format) -> String {
    let (m, n) = (table.max_m, table.max_n);
    let value = table.get(m, n).to_string();
    match format {
        Format::Text => format!("{value}\n"),
        Format::Json => json(&DelannoyValue { m, n, q_analogue: kind, value: &value }),
        Format::Csv => {
            let header: Vec<String> =
                std::iter::once("m\\n".to_string()).chain((0..=n).map(|j| j.to_string())).collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            csv(
                &header,
                (0..=m)
                    .map(|i| std::iter::once(i.to_string()).chain((0..=n).map(move |j| table.get(i, j).to_string()))),
            )
        }
    }
}

pub fn congruence(records: &[CongruenceRecord], format: Format) -> String {
    match format {
        Format::Json => json(records),
        Format::Csv => csv(
            &["p", "m", "case", "passed"],
            records.iter().map(|r| [r.p.to_string(), r.m.to_string(), r.case.to_string(), r.passed.to_string()]),
        ),
        Format::Text => {
            records.iter().map(|r| format!("{} p={} m={} case={}\n", verdict(r.passed), r.p, r.m, r.case)).collect()
        }
    }
}

pub fn positivity(records: &[PositivityRecord], format: Format) -> String {
    let range = |r: &PositivityRecord| r.degree_range.map(|(lo, hi)| format!("{lo}..{hi}")).unwrap_or_default();
    match format {
        Format::Json => json(records),
        Format::Csv => csv(
            &["claim", "m", "n", "r", "divisible", "nonneg", "min_coeff", "degree_range"],
            records.iter().map(|r| {
                [
                    r.claim.to_string(),
                    r.m.to_string(),
                    r.n.to_string(),
                    r.r.to_string(),
                    r.divisible.to_string(),
                    r.nonneg.to_string(),
                    r.min_coeff.clone().unwrap_or_default(),
                    range(r),
                ]
            }),
        ),
        Format::Text => records
            .iter()
            .map(|r| {
                format!(
                    "{} {} m={} n={} r={} divisible={} nonneg={} min={} degrees={}\n",
                    verdict(r.passed()),
                    r.claim,
                    r.m,
                    r.n,
                    r.r,
                    r.divisible,
                    r.nonneg,
                    r.min_coeff.as_deref().unwrap_or("-"),
                    range(r)
                )
            })
            .collect(),
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

//! CSV and JSON serialization of verification reports.
//!
//! CSV carries one row per recorded violation, `claim,param,observed,required`,
//! and closes each report with a summary row whose `param` reads
//! `scanned=N,violations=M` and whose `observed` holds the minimum slack.

use std::io::{self, Read, Write};

use clap::ValueEnum;
use primespan_core::verify::Violation;
use primespan_core::{ClaimReport, RuleTable};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
struct CsvRow {
    claim: String,
    param: String,
    observed: Option<f64>,
    required: Option<f64>,
}

const SUMMARY_PREFIX: &str = "scanned=";

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn csv_err(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::new(io::ErrorKind::InvalidData, format!("{other:?}")),
    }
}

#[derive(Serialize)]
struct Summary {
    reports: usize,
    scanned: u64,
    violations: u64,
    holds: bool,
}

#[derive(Serialize)]
struct JsonReports<'a> {
    reports: &'a [ClaimReport],
    summary: Summary,
}

/// Writes `reports` in `format`.
pub fn emit_reports<W: Write>(mut w: W, reports: &[ClaimReport], format: Format) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut out = csv_writer(&mut w);
            for r in reports {
                let claim = r.claim.to_string();
                for v in &r.violations {
                    out.serialize(CsvRow {
                        claim: claim.clone(),
                        param: v.param.clone(),
                        observed: Some(v.observed),
                        required: Some(v.required),
                    })
                    .map_err(csv_err)?;
                }
                out.serialize(CsvRow {
                    claim,
                    param: format!(
                        "{SUMMARY_PREFIX}{},violations={}",
                        r.scanned, r.violation_count
                    ),
                    observed: r.min_slack_value(),
                    required: None,
                })
                .map_err(csv_err)?;
            }
            out.flush()?;
        }
        Format::Json => {
            let summary = Summary {
                reports: reports.len(),
                scanned: reports.iter().map(|r| r.scanned).sum(),
                violations: reports.iter().map(|r| r.violation_count).sum(),
                holds: reports.iter().all(ClaimReport::holds),
            };
            serde_json::to_writer_pretty(&mut w, &JsonReports { reports, summary })?;
            w.write_all(b"\n")?;
        }
    }
    Ok(())
}

/// Reads back the violation rows of an emitted CSV, skipping summaries.
pub fn read_csv_violations<R: Read>(r: R) -> io::Result<Vec<(String, Violation)>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for row in rdr.deserialize::<CsvRow>() {
        let row = row.map_err(csv_err)?;
        if row.param.starts_with(SUMMARY_PREFIX) {
            continue;
        }
        let (Some(observed), Some(required)) = (row.observed, row.required) else {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("violation row `{}` lacks values", row.param),
            ));
        };
        out.push((
            row.claim,
            Violation {
                param: row.param,
                observed,
                required,
            },
        ));
    }
    Ok(out)
}

#[derive(Serialize)]
struct JsonTable<'a> {
    rules: Vec<&'static str>,
    rows: Vec<JsonRuleRow<'a>>,
    summary: TableSummary,
}

#[derive(Serialize)]
struct JsonRuleRow<'a> {
    n: u64,
    values: &'a [f64],
    next_prime: u64,
}

#[derive(Serialize)]
struct TableSummary {
    rows: usize,
}

/// Writes a rule comparison table. CSV columns are `n`, one per rule, then
/// `next_prime`.
pub fn emit_rule_table<W: Write>(mut w: W, table: &RuleTable, format: Format) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut out = csv_writer(&mut w);
            let mut header = vec!["n"];
            header.extend(table.rules.iter().map(|r| r.name()));
            header.push("next_prime");
            out.write_record(&header).map_err(csv_err)?;
            for row in &table.rows {
                let mut rec = vec![row.n.to_string()];
                rec.extend(row.values.iter().map(f64::to_string));
                rec.push(row.next_prime.to_string());
                out.write_record(&rec).map_err(csv_err)?;
            }
            out.flush()?;
        }
        Format::Json => {
            let doc = JsonTable {
                rules: table.rules.iter().map(|r| r.name()).collect(),
                rows: table
                    .rows
                    .iter()
                    .map(|r| JsonRuleRow {
                        n: r.n,
                        values: &r.values,
                        next_prime: r.next_prime,
                    })
                    .collect(),
                summary: TableSummary {
                    rows: table.rows.len(),
                },
            };
            serde_json::to_writer_pretty(&mut w, &doc)?;
            w.write_all(b"\n")?;
        }
    }
    Ok(())
}

//! Evaluation report output.

use std::fmt::Write as _;

use ctxtrust_core::evaluation::ComparisonReport;

pub const REPORT_HEADER: [&str; 10] = [
    "seller",
    "known",
    "unknown",
    "measure",
    "similarity",
    "predicted",
    "real",
    "signed_error_pct",
    "abs_error_pct",
    "rate_difference",
];

/// Fixed decimals keep reports diff-stable.
pub fn fixed(value: f64) -> String {
    format!("{value:.6}")
}

pub fn report_csv(report: &ComparisonReport) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(REPORT_HEADER).expect("in-memory write");
    for r in &report.records {
        w.write_record([
            r.seller.as_str(),
            &r.known_context,
            &r.unknown_context,
            r.measure.name(),
            &fixed(r.similarity),
            &fixed(r.predicted_rate),
            &fixed(r.real_rate),
            &fixed(r.signed_error_pct),
            &fixed(r.abs_error_pct),
            &fixed(r.rate_difference),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

pub fn summary_table(report: &ComparisonReport) -> String {
    let mut out = String::new();
    let width = report
        .summary
        .iter()
        .map(|s| s.measure.name().len())
        .max()
        .unwrap_or(0)
        .max("measure".len());
    writeln!(
        out,
        "{:<width$}  {:>5}  {:>18}",
        "measure", "rows", "mean_abs_error_pct"
    )
    .unwrap();
    for s in &report.summary {
        writeln!(
            out,
            "{:<width$}  {:>5}  {:>18}",
            s.measure.name(),
            s.rows,
            fixed(s.mean_abs_error_pct)
        )
        .unwrap();
    }
    match report.pearson_rate_difference {
        Some(r) => writeln!(
            out,
            "pearson(rate_difference, weighted abs error): {}",
            fixed(r)
        )
        .unwrap(),
        None => writeln!(out, "pearson(rate_difference, weighted abs error): n/a").unwrap(),
    }
    out
}

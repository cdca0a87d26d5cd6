//! Configurations of the three reference tables and their CSV rendering.

use rayon::prelude::*;

use crate::entryexit::SequenceConfig;
use crate::error::{Error, Result};

use super::analysis::Analysis;
use super::spec::ModelSpec;
use super::fmt_sig;

/// One table row: a model, its starting coordinate and the published value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub table: u8,
    pub row: usize,
    pub spec: ModelSpec,
    /// Starting coordinate in model units (the two-stroke uses `y`, not `y - delta`).
    pub y0: f64,
    pub iterations: usize,
    pub reported: f64,
}

impl TableRow {
    pub fn config(&self) -> SequenceConfig {
        SequenceConfig::new(self.spec.section_height(self.y0), self.iterations)
    }
}

pub fn table_rows(id: u8) -> Result<Vec<TableRow>> {
    let rows: Vec<(ModelSpec, f64, usize, f64)> = match id {
        1 => [
            (100, 0.001, 0, 1.0, 0.330445),
            (1000, 0.001, 0, 2.0, 0.321854),
            (100, 0.001, 1, 1.0, 0.600363),
            (100, 0.001, 2, 1.0, 0.714286),
            (100, 0.001, 3, 1.0, 0.777777),
            (100, 0.001, 4, 1.0, 0.818176),
            (100, 0.3, 49, 1.0, 0.980189),
        ]
        .into_iter()
        .map(|(it, y0, j, a, rep)| (ModelSpec::Lienard { j, a }, y0, it, rep))
        .collect(),
        2 => [
            (1.1, 1.0, 1.0, 1.0, 0.335137),
            (1.1, 1.0, 1.0, 10.0, 0.335137),
            (1.1, 2.0, 1.0, 1.0, 0.324280),
            (10.1, 5.0, 10.0, 1.0, 0.331570),
        ]
        .into_iter()
        .map(|(y0, alpha, delta, gamma, rep)| (ModelSpec::TwoStroke { alpha, delta, gamma }, y0, 1000, rep))
        .collect(),
        3 => [
            (1, 2, 0, 1.0, 1.0, 0.345550),
            (1, 2, 0, 1.0, -1.0, 0.345550),
            (1, 2, 10, 1.0, 1.0, 0.920386),
            (1, 4, 10, 1.0, 1.0, 0.858920),
            (1, 10, 10, 1.0, 1.0, 0.673676),
            (3, 4, 10, 1.0, 1.0, 0.858265),
            (9, 10, 5, 5.0, 1.0, 0.523656),
            (99, 100, 50, 1.0, 1.0, 0.502158),
        ]
        .into_iter()
        .map(|(m, n, j, alpha, beta, rep)| (ModelSpec::NormalForm { n, m, j, alpha, beta }, 0.1, 2000, rep))
        .collect(),
        other => return Err(Error::InvalidConfig(format!("no table {other}; expected 1, 2 or 3"))),
    };
    Ok(rows
        .into_iter()
        .enumerate()
        .map(|(i, (spec, y0, iterations, reported))| TableRow { table: id, row: i + 1, spec, y0, iterations, reported })
        .collect())
}

#[derive(Debug, Clone)]
pub struct RowOutcome {
    pub row: TableRow,
    pub result: std::result::Result<Analysis, Error>,
}

/// Runs all rows in parallel; the output keeps row order.
pub fn run_table(id: u8) -> Result<Vec<RowOutcome>> {
    let rows = table_rows(id)?;
    Ok(rows
        .into_par_iter()
        .map(|row| RowOutcome { row, result: Analysis::run(row.spec, row.config()) })
        .collect())
}

pub const TABLE_HEADER: [&str; 19] = [
    "table",
    "row",
    "model",
    "iterations",
    "y0",
    "theoretical",
    "reported",
    "cahen",
    "borel",
    "tailnucleus",
    "auto_method",
    "auto",
    "best_method",
    "result",
    "gap",
    "codimension",
    "computed_iterations",
    "truncated",
    "status",
];

/// CSV text for a table run. Deterministic: no timings are included.
pub fn table_csv(outcomes: &[RowOutcome]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TABLE_HEADER).map_err(csv_err)?;
    for o in outcomes {
        let r = &o.row;
        let theoretical = crate::dimension::theoretical_dimension(
            r.spec.contact_order(),
            crate::dimension::JIndex::Finite(r.spec.j()),
        );
        let mut rec = vec![
            r.table.to_string(),
            r.row.to_string(),
            r.spec.to_string(),
            r.iterations.to_string(),
            fmt_sig(r.y0),
            fmt_sig(theoretical),
            fmt_sig(r.reported),
        ];
        match &o.result {
            Ok(a) => {
                let auto = a.auto_method();
                let (best_m, best) = a.best();
                rec.extend([
                    fmt_sig(a.value(crate::dimension::Method::Cahen)),
                    fmt_sig(a.value(crate::dimension::Method::Borel)),
                    fmt_sig(a.value(crate::dimension::Method::TailNucleus)),
                    auto.to_string(),
                    fmt_sig(a.value(auto)),
                    best_m.to_string(),
                    fmt_sig(best),
                    fmt_sig((best - theoretical).abs()),
                    a.codimension(auto).codimension_label(),
                    a.sequence.iterations().to_string(),
                    a.sequence.truncated_early().to_string(),
                    "ok".into(),
                ]);
            }
            Err(e) => {
                rec.extend(std::iter::repeat_n(String::new(), 11));
                rec.push(format!("error: {e}"));
            }
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidConfig(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::InvalidConfig(format!("csv: {e}"))
}

/// Parses a table CSV back into rows of named fields.
pub fn parse_table_csv(text: &str) -> Result<Vec<Vec<(String, String)>>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
    if header != TABLE_HEADER {
        return Err(Error::InvalidConfig("unexpected table header".into()));
    }
    r.records()
        .map(|rec| {
            let rec = rec.map_err(csv_err)?;
            Ok(header.iter().cloned().zip(rec.iter().map(String::from)).collect())
        })
        .collect()
}

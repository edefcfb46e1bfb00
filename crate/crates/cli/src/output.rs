//! CSV and JSON encodings of solver results.
//!
//! Floats are written with 17 significant digits, which is enough for every
//! `f64` to survive a text round trip unchanged.

use std::io::{self, Write};

use bcs_gap::{
    asymptote_near_tc, asymptote_ratio, delta_and_derivative, GapPoint, MaterialParams, Slope,
    SweepConstants, SweepResult,
};
use serde::{Deserialize, Serialize};

/// Column order of the sweep CSV.
pub const SWEEP_COLUMNS: [&str; 9] = [
    "T",
    "tau",
    "f",
    "delta",
    "f_prime",
    "f_second",
    "residual",
    "asymptote",
    "asymptote_ratio",
];

pub const DIVERGENT: &str = "divergent";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// One sweep row, as written.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "T")]
    pub t: f64,
    pub tau: f64,
    pub f: f64,
    pub delta: f64,
    pub f_prime: f64,
    pub f_second: f64,
    pub residual: f64,
    pub asymptote: f64,
    pub asymptote_ratio: f64,
}

impl SweepRow {
    pub fn new(p: &GapPoint, c: &SweepConstants) -> Self {
        SweepRow {
            t: p.temperature,
            tau: p.tau,
            f: p.f,
            delta: p.delta,
            f_prime: p.f_prime,
            f_second: p.f_second,
            residual: p.residual,
            asymptote: asymptote_near_tc(p.temperature, c),
            asymptote_ratio: asymptote_ratio(p, c),
        }
    }

    fn values(&self) -> [f64; 9] {
        [
            self.t,
            self.tau,
            self.f,
            self.delta,
            self.f_prime,
            self.f_second,
            self.residual,
            self.asymptote,
            self.asymptote_ratio,
        ]
    }

    fn from_values(v: &[f64]) -> Self {
        SweepRow {
            t: v[0],
            tau: v[1],
            f: v[2],
            delta: v[3],
            f_prime: v[4],
            f_second: v[5],
            residual: v[6],
            asymptote: v[7],
            asymptote_ratio: v[8],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRecord {
    pub coupling: f64,
    pub debye_energy: f64,
    pub boltzmann: f64,
    pub t_c: f64,
    pub tau_c: f64,
    pub delta0: f64,
    pub delta0_reduced: f64,
    pub fprime_tc: f64,
    pub fsecond_tc: f64,
}

impl ConstantsRecord {
    pub fn new(params: &MaterialParams, c: &SweepConstants) -> Self {
        ConstantsRecord {
            coupling: params.coupling,
            debye_energy: params.debye_energy,
            boltzmann: params.boltzmann,
            t_c: c.t_c,
            tau_c: c.tau_c,
            delta0: c.delta0,
            delta0_reduced: c.delta0_reduced,
            fprime_tc: c.fprime_tc,
            fsecond_tc: c.fsecond_tc,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub constants: ConstantsRecord,
    pub points: Vec<SweepRow>,
}

impl SweepDocument {
    pub fn new(r: &SweepResult) -> Self {
        SweepDocument {
            constants: ConstantsRecord::new(&r.params, &r.constants),
            points: r
                .points
                .iter()
                .map(|p| SweepRow::new(p, &r.constants))
                .collect(),
        }
    }
}

/// A single `solve` result, including `Δ'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveRecord {
    #[serde(rename = "T")]
    pub t: f64,
    pub tau: f64,
    pub f: f64,
    pub delta: f64,
    pub f_prime: f64,
    pub f_second: f64,
    pub residual: f64,
    pub delta_prime: Slope,
}

impl SolveRecord {
    pub fn new(p: &GapPoint) -> Self {
        SolveRecord {
            t: p.temperature,
            tau: p.tau,
            f: p.f,
            delta: p.delta,
            f_prime: p.f_prime,
            f_second: p.f_second,
            residual: p.residual,
            delta_prime: delta_and_derivative(p).delta_prime,
        }
    }
}

fn slope_text(s: Slope) -> String {
    match s {
        Slope::Finite(v) => fmt_f64(v),
        Slope::Divergent => DIVERGENT.to_string(),
    }
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn csv_err(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

/// Writes a header row and rows of pre-formatted fields.
pub fn write_csv_table<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    w.flush()
}

pub fn write_json<W: Write, T: Serialize>(mut out: W, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")
}

pub fn write_sweep<W: Write>(out: W, doc: &SweepDocument, format: Format) -> io::Result<()> {
    match format {
        Format::Json => write_json(out, doc),
        Format::Csv => {
            let rows: Vec<Vec<String>> = doc
                .points
                .iter()
                .map(|r| r.values().iter().map(|&v| fmt_f64(v)).collect())
                .collect();
            write_csv_table(out, &SWEEP_COLUMNS, &rows)
        }
    }
}

pub fn write_solve<W: Write>(out: W, rec: &SolveRecord, format: Format) -> io::Result<()> {
    match format {
        Format::Json => write_json(out, rec),
        Format::Csv => {
            let mut row: Vec<String> = [
                rec.t,
                rec.tau,
                rec.f,
                rec.delta,
                rec.f_prime,
                rec.f_second,
                rec.residual,
            ]
            .iter()
            .map(|&v| fmt_f64(v))
            .collect();
            row.push(slope_text(rec.delta_prime));
            write_csv_table(
                out,
                &[
                    "T",
                    "tau",
                    "f",
                    "delta",
                    "f_prime",
                    "f_second",
                    "residual",
                    "delta_prime",
                ],
                &[row],
            )
        }
    }
}

/// Writes a flat record of named numbers as JSON or a one-row CSV.
pub fn write_scalars<W: Write>(out: W, fields: &[(&str, f64)], format: Format) -> io::Result<()> {
    match format {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = fields
                .iter()
                .map(|(k, v)| (k.to_string(), serde_json::Value::from(*v)))
                .collect();
            write_json(out, &map)
        }
        Format::Csv => {
            let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let row: Vec<String> = fields.iter().map(|(_, v)| fmt_f64(*v)).collect();
            write_csv_table(out, &header, &[row])
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

/// Reads back a sweep CSV written by [`write_sweep`].
pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRow>, ParseError> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| ParseError(e.to_string()))?;
    if header.iter().ne(SWEEP_COLUMNS.iter().copied()) {
        return Err(ParseError(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| ParseError(e.to_string()))?;
        let values = rec
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| ParseError(format!("row {i}: {e}")))?;
        if values.len() != SWEEP_COLUMNS.len() {
            return Err(ParseError(format!("row {i}: {} fields", values.len())));
        }
        rows.push(SweepRow::from_values(&values));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(0.0), "0.0000000000000000e0");
        assert_eq!(fmt_f64(-2.5), "-2.5000000000000000e0");
    }

    #[test]
    fn header_is_exact() {
        let mut buf = Vec::new();
        let doc = SweepDocument {
            constants: ConstantsRecord {
                coupling: 0.3,
                debye_energy: 1.0,
                boltzmann: 1.0,
                t_c: 1.0,
                tau_c: 1.0,
                delta0: 1.0,
                delta0_reduced: 1.0,
                fprime_tc: -1.0,
                fsecond_tc: -1.0,
            },
            points: vec![],
        };
        write_sweep(&mut buf, &doc, Format::Csv).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "T,tau,f,delta,f_prime,f_second,residual,asymptote,asymptote_ratio\n"
        );
    }

    #[test]
    fn divergent_slope_encoding() {
        assert_eq!(slope_text(Slope::Divergent), "divergent");
        let json = serde_json::to_string(&Slope::Divergent).unwrap();
        assert_eq!(json, r#"{"kind":"divergent"}"#);
        let json = serde_json::to_string(&Slope::Finite(-0.5)).unwrap();
        assert_eq!(json, r#"{"kind":"finite","value":-0.5}"#);
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(parse_sweep_csv("a,b\n1,2\n").is_err());
    }
}

use std::io::{self, Write};

use serde::Serialize;

use crate::config::Format;

/// One output record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub step: u64,
    pub n: u64,
    pub n1: u64,
    pub n2: u64,
    pub auc: Option<f64>,
    pub h_exact: Option<f64>,
    pub h_approx: Option<f64>,
    pub update_micros: u64,
    pub baseline_micros: Option<u64>,
}

pub const COLUMNS: [&str; 9] = [
    "step",
    "n",
    "n1",
    "n2",
    "auc",
    "h_exact",
    "h_approx",
    "update_micros",
    "baseline_micros",
];

pub struct ReportWriter<W: Write> {
    out: W,
    format: Format,
}

impl<W: Write> ReportWriter<W> {
    pub fn new(mut out: W, format: Format) -> io::Result<Self> {
        if format == Format::Csv {
            writeln!(out, "{}", COLUMNS.join(","))?;
        }
        Ok(ReportWriter { out, format })
    }

    pub fn write(&mut self, r: &MetricReport) -> io::Result<()> {
        match self.format {
            Format::Csv => {
                let f = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:?}"));
                let u = |x: Option<u64>| x.map_or(String::new(), |v| v.to_string());
                writeln!(
                    self.out,
                    "{},{},{},{},{},{},{},{},{}",
                    r.step,
                    r.n,
                    r.n1,
                    r.n2,
                    f(r.auc),
                    f(r.h_exact),
                    f(r.h_approx),
                    r.update_micros,
                    u(r.baseline_micros)
                )
            }
            Format::Jsonl => {
                serde_json::to_writer(&mut self.out, r)?;
                writeln!(self.out)
            }
        }
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

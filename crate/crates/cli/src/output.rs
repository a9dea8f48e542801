use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Top-level JSON document: one per invocation.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, P: Serialize, R: Serialize> {
    pub command: &'a str,
    pub params: P,
    pub results: Vec<R>,
    pub failures: Vec<String>,
}

pub fn write_json<P: Serialize, R: Serialize>(
    out: &mut dyn Write,
    command: &str,
    params: P,
    results: Vec<R>,
    failures: Vec<String>,
) -> io::Result<()> {
    let doc = Envelope {
        command,
        params,
        results,
        failures,
    };
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)
}

/// Writes `rows` as CSV with a header derived from the row struct's fields.
pub fn write_csv<R: Serialize>(out: &mut dyn Write, rows: &[R]) -> io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row).map_err(io::Error::other)?;
    }
    writer.flush()
}

//! Report files: a JSON envelope and flat CSV tables. Nothing time- or
//! host-dependent is written, so equal runs give equal bytes.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use squeeze_core::CVector;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Meta {
    pub seed: u64,
    pub samples: usize,
    pub tool_version: &'static str,
    /// Grid points dropped for lying outside the domain or on the deleted set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct Envelope<'a, S: Serialize, R: Serialize> {
    pub spec: &'a S,
    pub results: R,
    pub meta: Meta,
}

/// Opens `path`, or standard output when `None`.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut out = sink(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// `z1_re, z1_im, ..., zn_re, zn_im` (or with another prefix).
pub fn coordinate_header(prefix: &str, n: usize) -> Vec<String> {
    (1..=n)
        .flat_map(|k| [format!("{prefix}{k}_re"), format!("{prefix}{k}_im")])
        .collect()
}

pub fn coordinate_fields(z: &CVector) -> Vec<String> {
    z.to_re_im().into_iter().map(number).collect()
}

/// Shortest representation that parses back to the same `f64`.
pub fn number(x: f64) -> String {
    format!("{x}")
}

/// A CSV table: header plus rows, written in order.
pub fn write_csv(path: Option<&Path>, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let out = sink(path)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

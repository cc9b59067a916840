//! Tabular reports with certainty columns, written as CSV or JSON.

use std::fmt::Display;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::certainty::Certainty;
use crate::encoding::BitString;
use crate::error::{Error, Result};
use crate::profile::Profile;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub x: String,
    pub y: String,
    pub quantity: String,
    pub value: String,
    pub certainty: Certainty,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub rows: Vec<ReportRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), rows: Vec::new() }
    }

    pub fn push(
        &mut self,
        x: &BitString,
        y: Option<&BitString>,
        quantity: impl Into<String>,
        value: impl Display,
        certainty: Certainty,
    ) {
        self.rows.push(ReportRow {
            x: x.to_string_or_dash(),
            y: y.map(|y| y.to_string_or_dash()).unwrap_or_default(),
            quantity: quantity.into(),
            value: value.to_string(),
            certainty,
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.rows.extend(other.rows);
    }

    /// Rows whose quantity is `q`.
    pub fn select<'a>(&'a self, q: &'a str) -> impl Iterator<Item = &'a ReportRow> + 'a {
        self.rows.iter().filter(move |r| r.quantity == q)
    }

    pub fn write(&self, w: impl Write, format: Format) -> Result<()> {
        match format {
            Format::Csv => {
                let mut cw = csv::Writer::from_writer(w);
                cw.write_record(["x", "y", "quantity", "value", "certainty"])
                    .map_err(csv_err)?;
                for r in &self.rows {
                    cw.write_record([
                        r.x.as_str(),
                        r.y.as_str(),
                        r.quantity.as_str(),
                        r.value.as_str(),
                        &r.certainty.to_string(),
                    ])
                    .map_err(csv_err)?;
                }
                cw.flush()?;
            }
            Format::Json => {
                let mut w = w;
                serde_json::to_writer_pretty(&mut w, self)
                    .map_err(|e| Error::Io(e.into()))?;
                writeln!(w)?;
            }
        }
        Ok(())
    }

    pub fn render(&self, format: Format) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf, format).expect("writing to memory");
        String::from_utf8(buf).expect("reports are UTF-8")
    }
}

/// Writes `(coordinate, value, certainty)` rows with the given column names.
pub fn write_series(
    w: impl Write,
    format: Format,
    columns: [&str; 2],
    rows: &[(u32, Option<u32>, Certainty)],
) -> Result<()> {
    #[derive(Serialize)]
    struct Row<'a> {
        #[serde(flatten)]
        cols: std::collections::BTreeMap<&'a str, Option<u32>>,
        certainty: Certainty,
    }
    match format {
        Format::Csv => {
            let mut cw = csv::Writer::from_writer(w);
            cw.write_record([columns[0], columns[1], "certainty"]).map_err(csv_err)?;
            for (c, v, cert) in rows {
                let v = v.map(|v| v.to_string()).unwrap_or_else(|| "inf".into());
                cw.write_record([c.to_string(), v, cert.to_string()]).map_err(csv_err)?;
            }
            cw.flush()?;
        }
        Format::Json => {
            let out: Vec<Row> = rows
                .iter()
                .map(|(c, v, cert)| Row {
                    cols: [(columns[0], Some(*c)), (columns[1], *v)].into_iter().collect(),
                    certainty: *cert,
                })
                .collect();
            let mut w = w;
            serde_json::to_writer_pretty(&mut w, &out).map_err(|e| Error::Io(e.into()))?;
            writeln!(w)?;
        }
    }
    Ok(())
}

/// Writes rows of preformatted cells under `headers`. JSON output is an
/// array of objects keyed by header.
pub fn write_table(w: impl Write, format: Format, headers: &[&str], rows: &[Vec<String>]) -> Result<()> {
    match format {
        Format::Csv => {
            let mut cw = csv::Writer::from_writer(w);
            cw.write_record(headers).map_err(csv_err)?;
            for r in rows {
                cw.write_record(r).map_err(csv_err)?;
            }
            cw.flush()?;
        }
        Format::Json => {
            let out: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .iter()
                .map(|r| {
                    headers
                        .iter()
                        .zip(r)
                        .map(|(h, v)| (h.to_string(), serde_json::Value::String(v.clone())))
                        .collect()
                })
                .collect();
            let mut w = w;
            serde_json::to_writer_pretty(&mut w, &out).map_err(|e| Error::Io(e.into()))?;
            writeln!(w)?;
        }
    }
    Ok(())
}

/// Generator export: one `i,psi,certainty` row per generator.
pub fn write_generators(w: impl Write, format: Format, p: &Profile, certainties: &[Certainty]) -> Result<()> {
    let rows: Vec<Vec<String>> = p
        .generators()
        .iter()
        .enumerate()
        .map(|(k, (i, psi))| {
            let c = certainties.get(k).copied().unwrap_or(Certainty::Exact);
            vec![i.to_string(), psi.to_string(), c.to_string()]
        })
        .collect();
    write_table(w, format, &["i", "psi", "certainty"], &rows)
}

/// Reads a CSV generator export back into a profile.
pub fn read_generators_csv(r: impl Read) -> Result<Profile> {
    let mut rd = csv::Reader::from_reader(r);
    let mut pts = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(csv_err)?;
        let num = |k: usize| -> Result<u32> {
            rec.get(k)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad generator row {rec:?}")))
        };
        pts.push((num(0)?, num(1)?));
    }
    let p = Profile::close(pts.clone());
    if p.generators() != pts.as_slice() {
        return Err(Error::Parse("rows are not a canonical generator list".into()));
    }
    Ok(p)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.into())
}

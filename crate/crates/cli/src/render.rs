use std::io::Write;
use std::time::Duration;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use betajack::ensembles::EnsembleSpec;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Rows of preformatted cells, printed aligned or as CSV.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&str>) -> Self {
        Self::new_owned(header.into_iter().map(String::from).collect())
    }

    pub fn new_owned(header: Vec<String>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn write(&self, out: &mut impl Write, format: Format, title: Option<&str>) -> Result<(), Failure> {
        match format {
            Format::Csv => {
                if let Some(t) = title {
                    writeln!(out, "# {t}")?;
                }
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(&self.header).map_err(csv_failure)?;
                for r in &self.rows {
                    w.write_record(r).map_err(csv_failure)?;
                }
                w.flush()?;
            }
            Format::Table | Format::Json => {
                if let Some(t) = title {
                    writeln!(out, "{t}")?;
                }
                let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
                for r in &self.rows {
                    for (w, c) in widths.iter_mut().zip(r) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                let line = |cells: &[String]| {
                    let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
                    padded.join("  ").trim_end().to_string()
                };
                writeln!(out, "{}", line(&self.header))?;
                let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
                writeln!(out, "{}", rule.join("  "))?;
                for r in &self.rows {
                    writeln!(out, "{}", line(r))?;
                }
            }
        }
        Ok(())
    }
}

fn csv_failure(e: csv::Error) -> Failure {
    Failure { code: 1, message: format!("csv output: {e}") }
}

/// The JSON document printed by `--format json`.
pub struct Record {
    command: &'static str,
    ensemble: Value,
    results: Value,
    metadata: serde_json::Map<String, Value>,
}

impl Record {
    pub fn new(command: &'static str, ensemble: Option<&EnsembleSpec>, results: &impl Serialize) -> Self {
        let mut metadata = serde_json::Map::new();
        metadata.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        Record {
            command,
            ensemble: ensemble.map_or(Value::Null, |s| serde_json::to_value(s).unwrap_or(Value::Null)),
            results: serde_json::to_value(results).unwrap_or(Value::Null),
            metadata,
        }
    }

    /// Sampler runs also record the seed and wall time.
    pub fn sampled(mut self, seed: u64, runtime: Duration) -> Self {
        self.metadata.insert("seed".into(), json!(seed));
        self.metadata.insert("runtime_seconds".into(), json!(runtime.as_secs_f64()));
        self
    }

    pub fn write(self, out: &mut impl Write) -> Result<(), Failure> {
        let doc = json!({
            "command": self.command,
            "ensemble": self.ensemble,
            "results": self.results,
            "metadata": self.metadata,
        });
        serde_json::to_writer_pretty(&mut *out, &doc).map_err(|e| Failure { code: 1, message: e.to_string() })?;
        writeln!(out)?;
        Ok(())
    }
}

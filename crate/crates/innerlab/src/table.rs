//! Result tables and CSV output.
//!
//! Every file starts with `#` lines holding the version stamp and the full
//! config, so a run can be reproduced from its output alone.

use std::io::Write;

use crate::config::ExperimentConfig;
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let k = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[k].as_str()).collect())
    }
}

/// Shortest text that reads back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn write_csv(out: &mut impl Write, cfg: &ExperimentConfig, table: &Table) -> Result<(), Error> {
    let io = |e| Error::Io("output".into(), e);
    writeln!(out, "# innerlab {}", env!("CARGO_PKG_VERSION")).map_err(io)?;
    for line in cfg.to_text().lines() {
        writeln!(out, "# {line}").map_err(io)?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.columns).map_err(|e| Error::Csv(e.to_string()))?;
    for row in &table.rows {
        w.write_record(row).map_err(|e| Error::Csv(e.to_string()))?;
    }
    w.flush().map_err(io)?;
    Ok(())
}

pub fn render_csv(cfg: &ExperimentConfig, table: &Table) -> Result<Vec<u8>, Error> {
    let mut buf = Vec::new();
    write_csv(&mut buf, cfg, table)?;
    Ok(buf)
}

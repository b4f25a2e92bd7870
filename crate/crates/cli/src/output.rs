use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

/// Schema version written into the first line of every CSV.
pub const SCHEMA_VERSION: u32 = 1;

pub struct Table {
    pub experiment: &'static str,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
    /// Extra JSON written next to the CSV.
    pub sidecar: Option<serde_json::Value>,
}

impl Table {
    pub fn new(experiment: &'static str, columns: &'static [&'static str]) -> Self {
        Self {
            experiment,
            columns,
            rows: Vec::new(),
            sidecar: None,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_bytes(&self) -> CliResult<Vec<u8>> {
        let mut buf = format!("#htpl-csv:{}:v{SCHEMA_VERSION}\n", self.experiment).into_bytes();
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut buf);
        let fail = |e: csv::Error| CliError::Parse(format!("csv encoding: {e}"));
        w.write_record(self.columns).map_err(fail)?;
        for r in &self.rows {
            w.write_record(r).map_err(fail)?;
        }
        w.flush().map_err(|e| CliError::Parse(format!("csv encoding: {e}")))?;
        drop(w);
        Ok(buf)
    }
}

/// `out.csv` -> `out.channels.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("channels.json")
}

/// Writes the CSV and its sidecar; on any failure neither file is left
/// behind.
pub fn write_table(table: &Table, out: &Path) -> CliResult<()> {
    let bytes = table.to_bytes()?;
    let side = sidecar_path(out);
    let result = (|| {
        fs::write(out, &bytes).map_err(|e| CliError::io(out, e))?;
        if let Some(v) = &table.sidecar {
            let mut text = serde_json::to_string_pretty(v).map_err(|e| CliError::Parse(e.to_string()))?;
            text.push('\n');
            fs::write(&side, text).map_err(|e| CliError::io(&side, e))?;
        }
        Ok(())
    })();
    if result.is_err() {
        let _ = fs::remove_file(out);
        let _ = fs::remove_file(&side);
    }
    result
}

/// Shortest round-trip form; exponent notation for very small or large
/// magnitudes.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

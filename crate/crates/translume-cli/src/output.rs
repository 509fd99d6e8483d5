//! Plot-ready artifact writing: CSV with a tool-version comment line, or the
//! same table as JSON.  Floats are printed with 17 significant digits, which
//! round-trips f64 exactly, so identical runs produce byte-identical bodies.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use crate::config::OutputFormat;
use crate::error::CliResult;

/// Formats a float with 17 significant digits (1 leading + 16 fractional).
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// One table cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => fmt_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Float(x) => serde_json::json!(x),
            Cell::Int(i) => serde_json::json!(i),
            Cell::Text(s) => serde_json::json!(s),
        }
    }
}

/// A rectangular result table with named columns.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# translume {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    fn to_json(&self) -> serde_json::Value {
        let data: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(col, cell)| (col.to_string(), cell.json()))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::json!({
            "translume": env!("CARGO_PKG_VERSION"),
            "data": data,
        })
    }
}

/// Destination directory plus format, resolved from flags and config.
#[derive(Debug, Clone)]
pub struct OutputTarget {
    pub dir: PathBuf,
    pub format: OutputFormat,
}

impl OutputTarget {
    pub fn prepare(&self) -> CliResult<()> {
        fs::create_dir_all(&self.dir)?;
        Ok(())
    }

    /// Writes `table` under `stem.csv` or `stem.json` and returns the path.
    pub fn write_table(&self, stem: &str, table: &Table) -> CliResult<PathBuf> {
        let (name, body) = match self.format {
            OutputFormat::Csv => (format!("{stem}.csv"), table.to_csv()),
            OutputFormat::Json => (
                format!("{stem}.json"),
                format!("{:#}\n", table.to_json()),
            ),
        };
        let path = self.dir.join(name);
        fs::write(&path, body)?;
        Ok(path)
    }

    /// Writes a standalone JSON document (used for metadata sidecars,
    /// regardless of the table format).
    pub fn write_json(&self, name: &str, value: &serde_json::Value) -> CliResult<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, format!("{value:#}\n"))?;
        Ok(path)
    }
}

//! Tabular results rendered as CSV or JSON, to stdout or one file per table.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Deserialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// How real numbers are printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Significant(usize),
    Decimals(usize),
}

impl Default for Precision {
    fn default() -> Self {
        Precision::Significant(6)
    }
}

impl Precision {
    /// Text form with trailing fractional zeros removed.
    pub fn format(self, x: f64) -> String {
        if x.is_nan() {
            return "NaN".into();
        }
        if x.is_infinite() {
            return if x > 0.0 { "inf" } else { "-inf" }.into();
        }
        let text = match self {
            Precision::Decimals(d) => format!("{x:.d$}"),
            Precision::Significant(p) => {
                let p = p.clamp(1, 17);
                if x == 0.0 {
                    return "0".into();
                }
                let rounded: f64 = format!("{:.*e}", p - 1, x).parse().expect("valid float");
                let exp = rounded.abs().log10().floor() as i64;
                let decimals = (p as i64 - 1 - exp).max(0) as usize;
                format!("{rounded:.decimals$}")
            }
        };
        let text = if text.contains('.') {
            text.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            text
        };
        if text == "-0" {
            "0".into()
        } else {
            text
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Real(f64),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self, prec: Precision) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => prec.format(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self, prec: Precision) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(i) => Value::from(*i),
            Cell::Real(x) => prec
                .format(*x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as u64)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Cell::Int(u64::from(i))
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone)]
struct Column {
    name: String,
    in_csv: bool,
}

/// A named table of records plus free-form metadata that only JSON carries.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    columns: Vec<Column>,
    rows: Vec<Vec<Cell>>,
    meta: Map<String, Value>,
    /// Render a one-row table as a bare JSON object.
    flat: bool,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns
                .iter()
                .map(|c| Column {
                    name: (*c).to_owned(),
                    in_csv: true,
                })
                .collect(),
            rows: Vec::new(),
            meta: Map::new(),
            flat: false,
        }
    }

    /// Adds a column that appears in JSON records but not in CSV.
    pub fn json_column(mut self, name: &str) -> Self {
        self.columns.push(Column {
            name: name.to_owned(),
            in_csv: false,
        });
        self
    }

    pub fn flat(mut self) -> Self {
        self.flat = true;
        self
    }

    pub fn meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.meta.insert(key.to_owned(), value.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    fn write_csv(&self, out: &mut dyn Write, prec: Precision) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let keep: Vec<bool> = self.columns.iter().map(|c| c.in_csv).collect();
        w.write_record(self.columns.iter().filter(|c| c.in_csv).map(|c| c.name.as_str()))?;
        for row in &self.rows {
            w.write_record(
                row.iter()
                    .zip(&keep)
                    .filter(|(_, &k)| k)
                    .map(|(cell, _)| cell.csv(prec)),
            )?;
        }
        w.flush()?;
        Ok(())
    }

    fn to_json(&self, prec: Precision) -> Value {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, cell)| (c.name.clone(), cell.json(prec)))
                        .collect(),
                )
            })
            .collect();
        if self.flat && records.len() == 1 {
            return records.into_iter().next().expect("one record");
        }
        let mut obj = Map::new();
        obj.insert("table".into(), Value::String(self.name.clone()));
        if !self.meta.is_empty() {
            obj.insert("meta".into(), Value::Object(self.meta.clone()));
        }
        obj.insert("records".into(), Value::Array(records));
        Value::Object(obj)
    }
}

/// Where and how tables are written.
#[derive(Debug, Clone, Default)]
pub struct Sink {
    pub format: Format,
    pub precision: Precision,
    pub out_dir: Option<PathBuf>,
}

impl Sink {
    fn render(&self, table: &Table, out: &mut dyn Write) -> Result<()> {
        match self.format {
            Format::Csv => table.write_csv(out, self.precision),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &table.to_json(self.precision))?;
                writeln!(out)?;
                Ok(())
            }
        }
    }

    /// Writes each table to `<out_dir>/<name>.<ext>` when an output
    /// directory is set, otherwise to `stdout`. Several CSV tables on stdout
    /// are separated by a blank line and introduced by a `# name` line;
    /// several JSON tables become one array.
    pub fn emit(&self, tables: &[Table], stdout: &mut dyn Write) -> Result<Vec<PathBuf>> {
        if let Some(dir) = &self.out_dir {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let mut written = Vec::with_capacity(tables.len());
            for t in tables {
                let path = dir.join(format!("{}.{}", file_stem(&t.name), self.format.extension()));
                let mut buf = Vec::new();
                self.render(t, &mut buf)?;
                write_file(&path, &buf)?;
                log::info!("wrote {}", path.display());
                written.push(path);
            }
            return Ok(written);
        }
        match (self.format, tables.len()) {
            (_, 1) => self.render(&tables[0], stdout)?,
            (Format::Csv, _) => {
                for (i, t) in tables.iter().enumerate() {
                    if i > 0 {
                        writeln!(stdout)?;
                    }
                    writeln!(stdout, "# {}", t.name)?;
                    self.render(t, stdout)?;
                }
            }
            (Format::Json, _) => {
                let all: Vec<Value> = tables.iter().map(|t| t.to_json(self.precision)).collect();
                serde_json::to_writer_pretty(&mut *stdout, &all)?;
                writeln!(stdout)?;
            }
        }
        stdout.flush()?;
        Ok(Vec::new())
    }
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.' { c } else { '_' })
        .collect()
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

// Copyright 2026 The gaussim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Data files: CSV with a `#` metadata block, or a JSON envelope.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Named numeric columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Suffix appended to the output file stem; `None` for the main table.
    pub name: Option<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(name: Option<&str>, columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            name: name.map(str::to_string),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}

/// Where a table goes: the main table at `base`, others at `<stem>_<name>.<ext>`.
pub fn table_path(base: &Path, table: &Table) -> PathBuf {
    match &table.name {
        None => base.to_path_buf(),
        Some(name) => {
            let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let file = match base.extension() {
                Some(ext) => format!("{stem}_{name}.{}", ext.to_string_lossy()),
                None => format!("{stem}_{name}"),
            };
            base.with_file_name(file)
        }
    }
}

fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Metadata keys are written in sorted order; `timestamp` goes last and is
/// the only line that varies between identical runs.
pub fn write_table<W: Write>(
    mut out: W,
    table: &Table,
    meta: &Map<String, Value>,
    format: Format,
    timestamp: Option<u64>,
) -> io::Result<()> {
    match format {
        Format::Csv => {
            for (k, v) in meta {
                writeln!(out, "# {k}: {v}")?;
            }
            if let Some(ts) = timestamp {
                writeln!(out, "# generated_unix: {ts}")?;
            }
            writeln!(out, "{}", table.columns.join(","))?;
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                writeln!(out, "{}", cells.join(","))?;
            }
        }
        Format::Json => {
            let mut meta = meta.clone();
            meta.insert("columns".into(), Value::from(table.columns.clone()));
            if let Some(ts) = timestamp {
                meta.insert("generated_unix".into(), Value::from(ts));
            }
            let data: Vec<Value> = table
                .rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        table.columns.iter().cloned().zip(row.iter().map(|&x| number(x))).collect();
                    Value::Object(obj)
                })
                .collect();
            let mut envelope = Map::new();
            envelope.insert("meta".into(), Value::Object(meta));
            envelope.insert("data".into(), Value::Array(data));
            serde_json::to_writer_pretty(&mut out, &Value::Object(envelope))?;
            writeln!(out)?;
        }
    }
    out.flush()
}

pub fn write_file(
    path: &Path,
    table: &Table,
    meta: &Map<String, Value>,
    format: Format,
    timestamp: Option<u64>,
) -> io::Result<()> {
    let file = File::create(path)?;
    write_table(BufWriter::new(file), table, meta, format, timestamp)
}

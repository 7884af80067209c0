// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Report files. Every file starts with the same header: toolkit version,
//! config hash and seed. CSV files carry it as `#` comment lines, JSON files
//! as a `header` object.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use kdense::stats::Summary;
use kdense::Graph;
use serde::Serialize;

use crate::config::{Format, RunConfig};

pub const TOOLKIT: &str = "kdense";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub toolkit: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    pub seed: u64,
}

impl Header {
    pub fn for_config(cfg: &RunConfig) -> Header {
        Header {
            toolkit: TOOLKIT,
            version: VERSION,
            config_hash: cfg.hash(),
            seed: cfg.seed,
        }
    }

    fn comment_lines(&self) -> String {
        format!(
            "# {} {}\n# config_hash: {}\n# seed: {}\n",
            self.toolkit, self.version, self.config_hash, self.seed
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    UInt(u64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn to_field(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::UInt(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

macro_rules! cell_from {
    ($($t:ty => $variant:ident as $as:ty),*) => {
        $(impl From<$t> for Cell {
            fn from(v: $t) -> Cell {
                Cell::$variant(v as $as)
            }
        })*
    };
}

cell_from!(u32 => UInt as u64, u64 => UInt as u64, usize => UInt as u64, i64 => Int as i64, f64 => Float as f64);

impl From<&str> for Cell {
    fn from(v: &str) -> Cell {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Cell {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Cell {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Builds a `Vec<Cell>` from mixed values.
#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => {
        vec![$($crate::report::Cell::from($x)),*]
    };
}

/// Columns appended by [`summary_cells`].
pub const SUMMARY_COLUMNS: [&str; 6] = ["mean", "p10", "p90", "min", "max", "n"];

pub fn summary_cells(s: Option<&Summary>) -> Vec<Cell> {
    match s {
        Some(s) => row![s.mean, s.p10, s.p90, s.min, s.max, s.n],
        None => row![
            None::<f64>,
            None::<f64>,
            None::<f64>,
            None::<f64>,
            None::<f64>,
            0usize
        ],
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: impl IntoIterator<Item = S>) -> Table {
        Table {
            columns: columns
                .into_iter()
                .map(|c| c.as_ref().to_string())
                .collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Serialize)]
struct Wrapped<'a, T: Serialize> {
    header: &'a Header,
    #[serde(flatten)]
    body: &'a T,
}

/// Writes report files into one output directory.
pub struct Reporter {
    dir: PathBuf,
    header: Header,
    format: Format,
}

impl Reporter {
    pub fn new(cfg: &RunConfig) -> anyhow::Result<Reporter> {
        fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
        Ok(Reporter {
            dir: cfg.out.clone(),
            header: Header::for_config(cfg),
            format: cfg.format,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn header(&self) -> &Header {
        &self.header
    }

    fn write(&self, name: &str, bytes: Vec<u8>) -> anyhow::Result<()> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))
    }

    /// `name.csv` or `name.json` depending on the configured format.
    pub fn table(&self, name: &str, table: &Table) -> anyhow::Result<()> {
        match self.format {
            Format::Json => self.json(name, table),
            Format::Csv => {
                let mut buf = self.header.comment_lines().into_bytes();
                {
                    let mut w = csv::Writer::from_writer(&mut buf);
                    w.write_record(&table.columns)?;
                    for row in &table.rows {
                        w.write_record(row.iter().map(Cell::to_field))?;
                    }
                    w.flush()?;
                }
                self.write(&format!("{name}.csv"), buf)
            }
        }
    }

    /// `name.json` regardless of format; `body` must serialize to an object.
    pub fn json<T: Serialize>(&self, name: &str, body: &T) -> anyhow::Result<()> {
        let mut bytes = serde_json::to_vec_pretty(&Wrapped {
            header: &self.header,
            body,
        })?;
        bytes.push(b'\n');
        self.write(&format!("{name}.json"), bytes)
    }

    /// Canonical edge list preceded by the header as comments, so it loads
    /// back unchanged.
    pub fn edge_list(&self, rel_path: &str, g: &Graph) -> anyhow::Result<()> {
        let mut buf = self.header.comment_lines().into_bytes();
        g.write_edge_list(&mut buf)?;
        self.write(rel_path, buf)
    }
}

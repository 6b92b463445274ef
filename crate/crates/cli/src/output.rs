//! Tables rendered as JSON, CSV or LaTeX.

use std::io::Write;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Latex,
}

/// A table cell; pairs keep their group so LaTeX can print `[V,ν]_G`.
#[derive(Clone, Debug)]
pub enum Cell {
    Text(String),
    Int(i64),
    Pair { bracket: String, group: String },
}

impl Cell {
    fn plain(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Pair { bracket, group } => format!("{bracket}_{group}"),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            other => json!(other.plain()),
        }
    }

    fn latex(&self) -> String {
        match self {
            Cell::Pair { bracket, group } => format!("${}_{{\\mathrm{{{}}}}}$", escape(bracket), escape(group)),
            other => escape(&other.plain()),
        }
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '{' | '}' | '_' | '#' | '%' | '&' | '$' => {
                out.push('\\');
                out.push(c);
            }
            '^' => out.push_str("\\^{}"),
            _ => out.push(c),
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Table { title: title.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn with_columns(title: impl Into<String>, columns: Vec<String>) -> Self {
        Table { title: title.into(), columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(r) {
                    m.insert(c.clone(), v.json());
                }
                Value::Object(m)
            })
            .collect();
        json!({ "title": self.title, "columns": self.columns, "rows": rows })
    }
}

pub fn render(tables: &[Table], format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let v: Value = if tables.len() == 1 {
                tables[0].to_json()
            } else {
                Value::Array(tables.iter().map(Table::to_json).collect())
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))
        }
        Format::Csv => {
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                writeln!(out, "# {}", t.title)?;
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&t.columns)?;
                for r in &t.rows {
                    w.write_record(r.iter().map(Cell::plain))?;
                }
                out.write_all(&w.into_inner().map_err(|e| e.into_error())?)?;
            }
            Ok(())
        }
        Format::Latex => {
            for t in tables {
                writeln!(out, "% {}", t.title)?;
                writeln!(out, "\\begin{{tabular}}{{{}}}", "l".repeat(t.columns.len()))?;
                let head: Vec<String> = t.columns.iter().map(|c| escape(c)).collect();
                writeln!(out, "{} \\\\ \\hline", head.join(" & "))?;
                for r in &t.rows {
                    let cells: Vec<String> = r.iter().map(Cell::latex).collect();
                    writeln!(out, "{} \\\\", cells.join(" & "))?;
                }
                writeln!(out, "\\end{{tabular}}")?;
            }
            Ok(())
        }
    }
}

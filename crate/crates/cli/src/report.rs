use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::Format;

/// A table cell. Floats carry the number of decimals used by the text
/// renderers; JSON always gets the full value.
#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    /// Arbitrary-size integer kept in decimal form.
    Int(String),
    Float(f64, usize),
    Bool(bool),
    Null,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn int(v: impl ToString) -> Self {
        Cell::Int(v.to_string())
    }

    pub fn float(v: f64) -> Self {
        Cell::Float(v, 6)
    }

    pub fn opt(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::float)
    }

    fn render(&self) -> String {
        match self {
            Cell::Text(s) | Cell::Int(s) => s.clone(),
            Cell::Float(v, d) => format!("{v:.d$}", d = *d),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => "-".into(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            // small integers as numbers, the rest as exact strings
            Cell::Int(s) => s.parse::<u64>().map_or_else(|_| Value::String(s.clone()), Value::from),
            Cell::Float(v, _) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Null => Value::Null,
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Float(v, _) => format!("{v:?}"),
            Cell::Null => String::new(),
            other => {
                let s = other.render();
                if s.contains([',', '"', '\n']) {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s
                }
            }
        }
    }
}

/// Output of one subcommand.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra structured results, JSON only.
    pub summary: Map<String, Value>,
    /// Free text printed under the table.
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, params: Value, columns: Vec<&'static str>) -> Self {
        Report {
            command,
            params,
            columns,
            rows: Vec::new(),
            summary: Map::new(),
            notes: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn summary(&mut self, key: &str, value: impl serde::Serialize) {
        self.summary
            .insert(key.to_string(), serde_json::to_value(value).expect("serialisable summary"));
    }

    pub fn render(&self, format: Format, meta: &RunMeta) -> String {
        match format {
            Format::Json => self.json(meta),
            Format::Csv => self.csv(),
            Format::Table => self.table(),
        }
    }

    fn json(&self, meta: &RunMeta) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> =
                    self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.to_json())).collect();
                Value::Object(obj)
            })
            .collect();
        let mut out = json!({
            "schema": 1,
            "command": self.command,
            "params": self.params,
            "rows": rows,
            "summary": self.summary,
        });
        if let (Some(ts), Some(ms)) = (meta.timestamp, meta.elapsed_ms) {
            out["timestamp"] = json!(ts);
            out["elapsed_ms"] = json!(ms);
        }
        let mut s = serde_json::to_string_pretty(&out).expect("valid JSON");
        s.push('\n');
        s
    }

    fn csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(Cell::csv).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }

    fn table(&self) -> String {
        let rendered: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| rendered.iter().map(|r| r[i].len()).chain([self.columns[i].len()]).max().unwrap_or(0))
            .collect();
        let mut s = String::new();
        let line = |cells: Vec<&str>| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}", w = *w))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        writeln!(s, "{}", line(self.columns.clone())).unwrap();
        for r in &rendered {
            writeln!(s, "{}", line(r.iter().map(String::as_str).collect())).unwrap();
        }
        for n in &self.notes {
            writeln!(s, "{n}").unwrap();
        }
        s
    }
}

/// Run metadata; both fields are `None` under `--deterministic`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunMeta {
    pub timestamp: Option<u64>,
    pub elapsed_ms: Option<u128>,
}

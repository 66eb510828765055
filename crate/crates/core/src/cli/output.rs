//! Reports rendered as TSV (with `#` summary lines) or JSON.

use super::Format;
use serde_json::{json, Map, Value};

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: Vec<String>,
    /// Structured payload merged into the JSON output.
    pub extra: Option<Value>,
    /// Nonzero when a check the command ran failed.
    pub exit_code: i32,
}

impl Report {
    pub fn new(headers: &[&str]) -> Report {
        Report { headers: headers.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Tsv => {
                let mut out = String::new();
                if !self.headers.is_empty() {
                    out.push_str(&self.headers.join("\t"));
                    out.push('\n');
                }
                for r in &self.rows {
                    out.push_str(&r.join("\t"));
                    out.push('\n');
                }
                for s in &self.summary {
                    out.push_str("# ");
                    out.push_str(s);
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let m: Map<String, Value> = self.headers.iter().cloned().zip(r.iter().map(|c| Value::String(c.clone()))).collect();
                        Value::Object(m)
                    })
                    .collect();
                let mut v = json!({ "rows": rows, "summary": self.summary });
                if let Some(extra) = &self.extra {
                    v["data"] = extra.clone();
                }
                let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
                s.push('\n');
                s
            }
        }
    }
}

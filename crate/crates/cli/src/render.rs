use clap::ValueEnum;
use invariants_core::rational::{self, Rational};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Exact(Rational),
}

impl Cell {
    fn render(&self, decimal: Option<usize>) -> String {
        match (self, decimal) {
            (Cell::Text(s), _) => s.clone(),
            (Cell::Exact(q), None) => rational::format(q),
            (Cell::Exact(q), Some(n)) => format!("{} (~{})", rational::format(q), rational::format_decimal(q, n)),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<Rational> for Cell {
    fn from(q: Rational) -> Self {
        Cell::Exact(q)
    }
}

impl From<&Rational> for Cell {
    fn from(q: &Rational) -> Self {
        Cell::Exact(q.clone())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    /// Two-column `field, value` table.
    pub fn key_values(pairs: Vec<(&str, Cell)>) -> Self {
        let mut t = Self::new(&["field", "value"]);
        for (k, v) in pairs {
            t.push(vec![k.into(), v]);
        }
        t
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), passed, detail: detail.into() }
    }

    fn status(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

pub struct Output {
    pub json: Value,
    pub table: Table,
    pub checks: Vec<Check>,
}

pub fn render(out: &Output, format: Format, decimal: Option<usize>) -> String {
    match format {
        Format::Json => render_json(out, decimal),
        Format::Table => render_table(out, decimal),
        Format::Csv => render_csv(out, decimal),
    }
}

fn render_json(out: &Output, decimal: Option<usize>) -> String {
    let mut value = out.json.clone();
    if let Value::Object(map) = &mut value {
        if let Some(n) = decimal {
            let approx: Vec<Value> = out
                .table
                .rows
                .iter()
                .flatten()
                .filter_map(|c| match c {
                    Cell::Exact(q) => Some(json!({
                        "exact": rational::format(q),
                        "approximate": format!("~{}", rational::format_decimal(q, n)),
                    })),
                    Cell::Text(_) => None,
                })
                .collect();
            map.insert("decimal_approximations".into(), Value::Array(approx));
        }
        if !out.checks.is_empty() {
            let checks = out
                .checks
                .iter()
                .map(|c| json!({ "name": c.name, "status": c.status(), "detail": c.detail }))
                .collect();
            map.insert("checks".into(), Value::Array(checks));
        }
    }
    let mut text = serde_json::to_string_pretty(&value).expect("json values serialize");
    text.push('\n');
    text
}

fn render_table(out: &Output, decimal: Option<usize>) -> String {
    let cells: Vec<Vec<String>> =
        out.table.rows.iter().map(|r| r.iter().map(|c| c.render(decimal)).collect()).collect();
    let mut widths: Vec<usize> = out.table.headers.iter().map(|h| h.chars().count()).collect();
    for row in &cells {
        for (i, c) in row.iter().enumerate() {
            if i < widths.len() {
                widths[i] = widths[i].max(c.chars().count());
            }
        }
    }
    let line = |row: &[String]| -> String {
        let padded: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{c:<w$}", w = widths.get(i).copied().unwrap_or(0)))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut text = String::new();
    text.push_str(&line(&out.table.headers));
    text.push('\n');
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    text.push_str(&rule.join("  "));
    text.push('\n');
    for row in &cells {
        text.push_str(&line(row));
        text.push('\n');
    }
    for c in &out.checks {
        text.push_str(&format!("check {}: {} ({})\n", c.name, c.status(), c.detail));
    }
    text
}

fn render_csv(out: &Output, decimal: Option<usize>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&out.table.headers).expect("in-memory csv");
    for row in &out.table.rows {
        w.write_record(row.iter().map(|c| c.render(decimal))).expect("in-memory csv");
    }
    let mut text = String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8");
    if !out.checks.is_empty() {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["check", "status", "detail"]).expect("in-memory csv");
        for c in &out.checks {
            w.write_record([c.name.as_str(), c.status(), c.detail.as_str()]).expect("in-memory csv");
        }
        text.push('\n');
        text.push_str(&String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8"));
    }
    text
}

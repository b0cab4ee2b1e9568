//! Report model and its JSON, CSV and markdown renderings.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use carbon_core::analysis::{Breakeven, BreakevenUnits};
use carbon_core::Ratio;

pub const SCHEMA_VERSION: u32 = 1;

/// A single result cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Text(String),
    /// A ratio whose denominator was zero.
    Undefined,
    /// A break-even that is never reached.
    Never,
}

impl Value {
    pub fn text(s: impl Into<String>) -> Value {
        Value::Text(s.into())
    }

    fn machine(&self) -> String {
        match self {
            Value::Num(v) => v.to_string(),
            Value::Int(i) => i.to_string(),
            Value::Text(s) => s.clone(),
            Value::Undefined => "undefined".into(),
            Value::Never => "never".into(),
        }
    }

    fn human(&self) -> String {
        match self {
            Value::Num(v) => sig6(*v),
            other => other.machine(),
        }
    }

    fn key_cmp(&self, other: &Value) -> Ordering {
        fn num(v: &Value) -> Option<f64> {
            match v {
                Value::Num(x) => Some(*x),
                Value::Int(i) => Some(*i as f64),
                _ => None,
            }
        }
        match (num(self), num(other)) {
            (Some(a), Some(b)) => a.total_cmp(&b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.machine().cmp(&other.machine()),
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<i32> for Value {
    fn from(v: i32) -> Self {
        Value::Int(v.into())
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.into())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<Ratio> for Value {
    fn from(r: Ratio) -> Self {
        match r {
            Ratio::Defined(v) => Value::Num(v),
            Ratio::Undefined => Value::Undefined,
        }
    }
}

impl From<Breakeven> for Value {
    fn from(b: Breakeven) -> Self {
        match b {
            Breakeven::Hours(h) => Value::Num(h),
            Breakeven::Never => Value::Never,
        }
    }
}

impl From<BreakevenUnits> for Value {
    fn from(b: BreakevenUnits) -> Self {
        match b {
            BreakevenUnits::Units(u) => Value::Num(u),
            BreakevenUnits::Never => Value::Never,
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Num(v) => s.serialize_f64(*v),
            Value::Int(i) => s.serialize_i64(*i),
            Value::Text(t) => s.serialize_str(t),
            Value::Undefined => s.serialize_str("undefined"),
            Value::Never => s.serialize_str("never"),
        }
    }
}

/// Six significant digits, `.` decimal, no grouping.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&exp) {
        return format!("{x:.5e}");
    }
    if exp > 5 {
        let scale = 10f64.powi(exp - 5);
        return format!("{:.0}", (x / scale).round() * scale);
    }
    let s = format!("{:.*}", (5 - exp) as usize, x);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// One table of results. The first column is the row's primary key.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultGroup {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl ResultGroup {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        ResultGroup {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// A `quantity,value,unit` table.
    pub fn quantities(name: &str) -> Self {
        Self::new(name, &["quantity", "value", "unit"])
    }

    pub fn row(&mut self, cells: Vec<Value>) -> &mut Self {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
        self
    }

    pub fn quantity(&mut self, name: &str, value: impl Into<Value>, unit: &str) -> &mut Self {
        self.row(vec![name.into(), value.into(), unit.into()])
    }
}

struct Row<'a>(&'a [String], &'a [Value]);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Serialize for ResultGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Row<'_>> = self.rows.iter().map(|r| Row(&self.columns, r)).collect();
        let mut st = s.serialize_struct("ResultGroup", 3)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("columns", &self.columns)?;
        st.serialize_field("rows", &rows)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

/// One plot-ready data point.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub x: Value,
    pub y: Value,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub results: Vec<ResultGroup>,
    pub warnings: Vec<String>,
    pub error: Option<String>,
    #[serde(skip)]
    pub series: Option<Vec<SeriesPoint>>,
}

impl Report {
    pub fn new(command: &[String]) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_vec(),
            inputs: Vec::new(),
            results: Vec::new(),
            warnings: Vec::new(),
            error: None,
            series: None,
        }
    }

    pub fn add_input(&mut self, name: impl Into<String>, sha256: String) {
        let digest = InputDigest {
            name: name.into(),
            sha256,
        };
        if !self.inputs.contains(&digest) {
            self.inputs.push(digest);
            self.inputs.sort();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(format!(
                "unknown format '{other}' (expected json, csv or markdown)"
            )),
        }
    }
}

pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => emit_csv(report),
        Format::Markdown => emit_markdown(report),
    }
}

fn csv_string(records: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
    for r in records {
        wtr.write_record(&r).expect("in-memory csv write");
    }
    String::from_utf8(wtr.into_inner().expect("flush")).expect("utf-8")
}

/// Long format: one line per cell, sorted by group then primary key.
fn emit_csv(report: &Report) -> String {
    let mut rows: Vec<(&str, &Value, Vec<String>)> = Vec::new();
    for g in &report.results {
        for r in &g.rows {
            let Some(key) = r.first() else { continue };
            for (col, v) in g.columns.iter().zip(r).skip(1) {
                rows.push((
                    &g.name,
                    key,
                    vec![g.name.clone(), key.machine(), col.clone(), v.machine()],
                ));
            }
        }
    }
    rows.sort_by(|a, b| a.0.cmp(b.0).then_with(|| a.1.key_cmp(b.1)));
    let header = vec!["group".into(), "key".into(), "field".into(), "value".into()];
    csv_string(std::iter::once(header).chain(rows.into_iter().map(|r| r.2)))
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn emit_markdown(report: &Report) -> String {
    let mut out = String::new();
    let subcommand = report.command.first().map(String::as_str).unwrap_or("");
    let _ = writeln!(out, "# carbon {subcommand}\n");
    let _ = writeln!(out, "- schema version: {}", report.schema_version);
    let _ = writeln!(out, "- command: `{}`", report.command.join(" "));
    for input in &report.inputs {
        let _ = writeln!(out, "- input `{}`: sha256 {}", input.name, input.sha256);
    }
    if let Some(e) = &report.error {
        let _ = writeln!(out, "\n## Error\n\n{e}");
    }
    let _ = writeln!(out, "\n## Results");
    if report.results.is_empty() {
        let _ = writeln!(out, "\n(none)");
    }
    for g in &report.results {
        let _ = writeln!(out, "\n### {}\n", g.name);
        let _ = writeln!(
            out,
            "| {} |",
            g.columns
                .iter()
                .map(|c| md_cell(c))
                .collect::<Vec<_>>()
                .join(" | ")
        );
        let _ = writeln!(out, "|{}", "---|".repeat(g.columns.len()));
        for r in &g.rows {
            let cells: Vec<String> = r.iter().map(|v| md_cell(&v.human())).collect();
            let _ = writeln!(out, "| {} |", cells.join(" | "));
        }
    }
    let _ = writeln!(out, "\n## Warnings\n");
    if report.warnings.is_empty() {
        let _ = writeln!(out, "(none)");
    }
    for w in &report.warnings {
        let _ = writeln!(out, "- {w}");
    }
    out
}

/// `x,y,label` rows in series order.
pub fn emit_series(points: &[SeriesPoint]) -> String {
    let header = vec!["x".to_string(), "y".into(), "label".into()];
    csv_string(
        std::iter::once(header).chain(
            points
                .iter()
                .map(|p| vec![p.x.machine(), p.y.machine(), p.label.clone()]),
        ),
    )
}

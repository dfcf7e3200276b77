//! Output records and the two encodings. Every float goes through [`fmt_f64`]
//! so JSON and CSV carry the same digits.

use std::io::{self, Write};

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Null,
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

/// 17 significant digits, which round-trips any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A fixed set of named columns plus `error` and `warnings`.
#[derive(Debug, Clone)]
pub struct Record {
    schema: &'static [&'static str],
    values: Vec<Field>,
    pub error: Option<String>,
    pub warnings: Vec<String>,
}

impl Record {
    pub fn new(schema: &'static [&'static str]) -> Self {
        Record {
            schema,
            values: vec![Field::Null; schema.len()],
            error: None,
            warnings: Vec::new(),
        }
    }

    fn slot(&mut self, name: &str) -> &mut Field {
        let i = self
            .schema
            .iter()
            .position(|c| *c == name)
            .unwrap_or_else(|| panic!("column {name} is not in the schema"));
        &mut self.values[i]
    }

    /// Non-finite values are stored as null with a warning.
    pub fn num(&mut self, name: &str, x: f64) -> &mut Self {
        if x.is_finite() {
            *self.slot(name) = Field::Num(x);
        } else {
            *self.slot(name) = Field::Null;
            self.warnings.push(format!("{name}: non-finite value"));
        }
        self
    }

    pub fn int(&mut self, name: &str, x: i64) -> &mut Self {
        *self.slot(name) = Field::Int(x);
        self
    }

    pub fn flag(&mut self, name: &str, x: bool) -> &mut Self {
        *self.slot(name) = Field::Bool(x);
        self
    }

    pub fn text(&mut self, name: &str, x: impl Into<String>) -> &mut Self {
        *self.slot(name) = Field::Text(x.into());
        self
    }

    /// Leaves the column null and notes why.
    pub fn missing(&mut self, name: &str, why: impl std::fmt::Display) -> &mut Self {
        *self.slot(name) = Field::Null;
        self.warnings.push(format!("{name}: {why}"));
        self
    }

    /// First failure wins the `error` column; all of them go to warnings.
    pub fn fail(&mut self, name: &str, err: &abcone::Error) -> &mut Self {
        if self.error.is_none() {
            self.error = Some(err.kind().to_string());
        }
        self.missing(name, err)
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("{");
        for (i, (name, v)) in self.schema.iter().zip(&self.values).enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&json_str(name));
            out.push(':');
            out.push_str(&json_value(v));
        }
        out.push_str(",\"error\":");
        out.push_str(&self.error.as_deref().map_or("null".into(), json_str));
        out.push_str(",\"warnings\":[");
        let w: Vec<String> = self.warnings.iter().map(|s| json_str(s)).collect();
        out.push_str(&w.join(","));
        out.push_str("]}");
        out
    }

    pub fn csv_header(schema: &[&str]) -> String {
        let mut cols: Vec<&str> = schema.to_vec();
        cols.extend(["error", "warnings"]);
        cols.join(",")
    }

    pub fn to_csv(&self) -> String {
        let mut cols: Vec<String> = self.values.iter().map(csv_value).collect();
        cols.push(self.error.as_deref().map_or(String::new(), csv_text));
        cols.push(csv_text(&self.warnings.join("|")));
        cols.join(",")
    }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn json_value(v: &Field) -> String {
    match v {
        Field::Null => "null".into(),
        Field::Num(x) => fmt_f64(*x),
        Field::Int(x) => x.to_string(),
        Field::Bool(x) => x.to_string(),
        Field::Text(s) => json_str(s),
    }
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_value(v: &Field) -> String {
    match v {
        Field::Null => String::new(),
        Field::Num(x) => fmt_f64(*x),
        Field::Int(x) => x.to_string(),
        Field::Bool(x) => x.to_string(),
        Field::Text(s) => csv_text(s),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn write_records(out: &mut dyn Write, format: Format, schema: &[&str], records: &[Record]) -> io::Result<()> {
    if format == Format::Csv {
        writeln!(out, "{}", Record::csv_header(schema))?;
    }
    for r in records {
        match format {
            Format::Json => writeln!(out, "{}", r.to_json())?,
            Format::Csv => writeln!(out, "{}", r.to_csv())?,
        }
    }
    out.flush()
}

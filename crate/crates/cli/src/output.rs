use alphafix::grounder::Base;
use alphafix::TruthValue;
use serde_json::{Map, Value};

use crate::Format;

/// Named columns of truth values over one base, rendered in a chosen format.
pub struct Table<'a> {
    base: &'a Base,
    columns: Vec<(String, Vec<TruthValue>)>,
}

impl<'a> Table<'a> {
    pub fn new(base: &'a Base) -> Self {
        Self {
            base,
            columns: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, values: &[TruthValue]) {
        self.columns.push((label.into(), values.to_vec()));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.table(),
            Format::Tsv => self.tsv(),
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.json()).expect("JSON values serialize");
                s.push('\n');
                s
            }
        }
    }

    fn names(&self) -> Vec<String> {
        self.base.atoms().iter().map(|a| a.to_string()).collect()
    }

    fn table(&self) -> String {
        let names = self.names();
        let width = names.iter().map(String::len).max().unwrap_or(0);
        let mut out = String::new();
        if let [(_, values)] = self.columns.as_slice() {
            for (name, v) in names.iter().zip(values) {
                out.push_str(&format!("{name:<width$}  {v}\n"));
            }
            return out;
        }
        let width = width.max("atom".len());
        let mut header = format!("{:<width$}", "atom");
        for (label, _) in &self.columns {
            header.push_str(&format!("  {label}"));
        }
        out.push_str(header.trim_end());
        out.push('\n');
        for (i, name) in names.iter().enumerate() {
            let mut line = format!("{name:<width$}");
            for (label, values) in &self.columns {
                line.push_str(&format!(
                    "  {:<w$}",
                    values[i].as_char(),
                    w = label.chars().count()
                ));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    fn tsv(&self) -> String {
        let mut out = String::new();
        if self.columns.len() != 1 {
            out.push_str("atom");
            for (label, _) in &self.columns {
                out.push('\t');
                out.push_str(label);
            }
            out.push('\n');
        }
        for (i, name) in self.names().iter().enumerate() {
            out.push_str(name);
            for (_, values) in &self.columns {
                out.push('\t');
                out.push(values[i].as_char());
            }
            out.push('\n');
        }
        out
    }

    fn column_json(&self, values: &[TruthValue]) -> Value {
        let map: Map<String, Value> = self
            .names()
            .into_iter()
            .zip(values)
            .map(|(n, v)| (n, Value::String(v.to_string())))
            .collect();
        Value::Object(map)
    }

    fn json(&self) -> Value {
        if let [(_, values)] = self.columns.as_slice() {
            return self.column_json(values);
        }
        let map: Map<String, Value> = self
            .columns
            .iter()
            .map(|(label, values)| (label.clone(), self.column_json(values)))
            .collect();
        Value::Object(map)
    }
}

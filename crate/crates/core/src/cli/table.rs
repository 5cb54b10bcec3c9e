use std::io::Write;

use serde_json::{json, Map, Value};

use super::config::OutputFormat;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    /// Some columns could not be computed; the rest are valid.
    Partial,
    Error,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Partial => "partial",
            RowStatus::Error => "error",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Row {
    pub values: Vec<Option<f64>>,
    pub status: RowStatus,
    pub messages: Vec<String>,
}

impl Row {
    pub fn new(width: usize) -> Self {
        Self {
            values: vec![None; width],
            status: RowStatus::Ok,
            messages: Vec::new(),
        }
    }

    /// A row whose leading values are known but whose computation failed.
    pub fn failed(width: usize, leading: &[f64], err: &Error) -> Self {
        let mut row = Self::new(width);
        for (i, v) in leading.iter().enumerate() {
            row.values[i] = Some(*v);
        }
        row.status = RowStatus::Error;
        row.messages.push(err.to_string());
        row
    }

    pub fn set(&mut self, col: usize, v: f64) {
        self.values[col] = Some(v);
    }

    /// Stores `v` or records the error and marks the row partial.
    pub fn try_set(&mut self, col: usize, v: Result<f64>) {
        match v {
            Ok(v) => self.values[col] = Some(v),
            Err(e) => {
                self.messages.push(e.to_string());
                if self.status == RowStatus::Ok {
                    self.status = RowStatus::Partial;
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Table {
    pub command: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Row>,
    /// `(key, value)` lines written before the header.
    pub metadata: Vec<(String, String)>,
}

impl Table {
    pub fn has_errors(&self) -> bool {
        self.rows.iter().any(|r| r.status == RowStatus::Error)
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r.values[i]).collect())
    }

    pub fn write(&self, format: OutputFormat, out: &mut dyn Write) -> Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(out),
            OutputFormat::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        write!(out, "# command: {}\r\n", self.command)?;
        for (k, v) in &self.metadata {
            write!(out, "# {k}: {v}\r\n")?;
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(out);
        let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        let mut header: Vec<&str> = self.columns.clone();
        header.extend(["status", "message"]);
        w.write_record(&header).map_err(csv_err)?;
        for row in &self.rows {
            let mut rec: Vec<String> = row
                .values
                .iter()
                .map(|v| v.map(format_number).unwrap_or_default())
                .collect();
            rec.push(row.status.as_str().to_string());
            rec.push(row.messages.join("; "));
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_json(&self, out: &mut dyn Write) -> Result<()> {
        let metadata: Map<String, Value> = self.metadata.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(&r.values) {
                    m.insert(
                        (*c).to_string(),
                        v.filter(|x| x.is_finite()).map_or(Value::Null, |x| json!(x)),
                    );
                }
                m.insert("status".into(), json!(r.status.as_str()));
                m.insert("messages".into(), json!(r.messages));
                Value::Object(m)
            })
            .collect();
        let doc = json!({
            "command": self.command,
            "metadata": metadata,
            "columns": self.columns,
            "rows": rows,
        });
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)?;
        Ok(())
    }
}

/// Scientific notation for `|x| < 1e-3` and `|x| >= 1e6`, fixed point with
/// ten significant digits otherwise.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if !(1e-3..1e6).contains(&a) {
        return format!("{x:.9e}");
    }
    let decimals = (9 - a.log10().floor() as i32).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

//! Report rendering: a text table on stdout (or JSON), and under `--out` a
//! JSON report, the same table, and flat records as CSV or JSON lines.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RecordFormat {
    Csv,
    Jsonl,
}

/// Column-aligned plain text.
#[derive(Clone, Debug, Default)]
pub struct Table {
    title: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: &str, header: &[&str]) -> Table {
        Table { title: title.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: vec![] }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let cols = self.header.len();
        let mut w: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for r in &self.rows {
            for (i, c) in r.iter().enumerate().take(cols) {
                w[i] = w[i].max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let s: Vec<String> = cells.iter().enumerate().map(|(i, c)| format!("{c:<width$}", width = w[i])).collect();
            s.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = String::new();
        if !self.title.is_empty() {
            out += &format!("{}\n", self.title);
        }
        out += &line(&self.header);
        out += &line(&w.iter().map(|&n| "-".repeat(n)).collect::<Vec<_>>());
        for r in &self.rows {
            out += &line(r);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Records {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Records {
    pub fn new(header: &[&'static str]) -> Records {
        Records { header: header.to_vec(), rows: vec![] }
    }

    fn csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(w.into_inner()?)
    }

    fn jsonl(&self) -> Result<Vec<u8>> {
        let mut out = vec![];
        for r in &self.rows {
            let obj: Map<String, Value> =
                self.header.iter().zip(r).map(|(h, v)| (h.to_string(), Value::String(v.clone()))).collect();
            serde_json::to_writer(&mut out, &obj)?;
            out.push(b'\n');
        }
        Ok(out)
    }
}

/// What a subcommand produced.
pub struct Outcome {
    pub name: &'static str,
    pub passed: bool,
    pub report: Value,
    pub text: String,
    pub records: Option<Records>,
}

pub struct Sink<'a> {
    pub out: Option<&'a Path>,
    pub format: Format,
    pub records: RecordFormat,
}

impl Sink<'_> {
    pub fn emit(&self, o: &Outcome) -> Result<()> {
        let shown = match self.format {
            Format::Table => o.text.clone(),
            Format::Json => serde_json::to_string_pretty(&o.report)? + "\n",
        };
        // a closed pipe (e.g. `| head`) is not an error
        match io::stdout().lock().write_all(shown.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(e.into()),
            _ => {}
        }
        let Some(dir) = self.out else { return Ok(()) };
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let write = |ext: &str, data: &[u8]| {
            let p = dir.join(format!("{}.{ext}", o.name));
            fs::write(&p, data).with_context(|| format!("writing {}", p.display()))
        };
        write("json", serde_json::to_string_pretty(&o.report)?.as_bytes())?;
        write("txt", o.text.as_bytes())?;
        if let Some(r) = &o.records {
            match self.records {
                RecordFormat::Csv => write("csv", &r.csv()?)?,
                RecordFormat::Jsonl => write("jsonl", &r.jsonl()?)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_aligns_columns() {
        let mut t = Table::new("", &["a", "long"]);
        t.row(vec!["xyz".into(), "1".into()]);
        assert_eq!(t.render(), "a    long\n---  ----\nxyz  1\n");
    }

    #[test]
    fn records_render_both_formats() {
        let mut r = Records::new(&["c", "n"]);
        r.rows.push(vec!["-2".into(), "5".into()]);
        assert_eq!(String::from_utf8(r.csv().unwrap()).unwrap(), "c,n\n-2,5\n");
        assert_eq!(String::from_utf8(r.jsonl().unwrap()).unwrap(), "{\"c\":\"-2\",\"n\":\"5\"}\n");
    }
}

//! Comma-separated tables with a `# meta key=value` preamble.

use std::fs::File;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::Path;

use crate::error::Result;

/// A table ready to be written: preamble entries, header and records.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table { meta: Vec::new(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        for (k, v) in &self.meta {
            writeln!(w, "# meta {k}={}", v.replace('\n', " "))?;
        }
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(&self.header)?;
        for row in &self.rows {
            csv.write_record(row)?;
        }
        csv.flush()?;
        Ok(())
    }

    /// Write to `path`, or to standard output when `path` is `None` or `-`.
    pub fn save(&self, path: Option<&Path>) -> Result<()> {
        match path {
            Some(p) if p != Path::new("-") => self.write_to(BufWriter::new(File::create(p)?)),
            _ => self.write_to(io::stdout().lock()),
        }
    }

    /// Read a table back, preamble included.
    pub fn read_from<R: BufRead>(r: R) -> Result<Table> {
        let mut meta = Vec::new();
        let mut body = String::new();
        for line in r.lines() {
            let line = line?;
            match line.strip_prefix("# meta ") {
                Some(kv) => {
                    let (k, v) = kv.split_once('=').unwrap_or((kv, ""));
                    meta.push((k.to_string(), v.to_string()));
                }
                None => {
                    body.push_str(&line);
                    body.push('\n');
                }
            }
        }
        let mut rdr = csv::Reader::from_reader(body.as_bytes());
        let header = rdr.headers()?.iter().map(String::from).collect();
        let rows = rdr.records().map(|r| r.map(|rec| rec.iter().map(String::from).collect())).collect::<Result<_, _>>()?;
        Ok(Table { meta, header, rows })
    }

    pub fn get_meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Values of column `name`.
    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k].as_str()).collect())
    }
}

/// Shortest round-trip representation of a float.
pub fn num(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut t = Table::new(&["s", "objective"]);
        t.meta("seed", 7).meta("tool", "feeder 0.1");
        t.push(vec![num(0.0), num(-0.0)]);
        t.push(vec![num(5.0), num(10.5)]);
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# meta seed=7\n# meta tool=feeder 0.1\ns,objective\n"));
        let back = Table::read_from(&buf[..]).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.get_meta("seed"), Some("7"));
        assert_eq!(back.column("objective").unwrap(), vec!["0", "10.5"]);
    }
}

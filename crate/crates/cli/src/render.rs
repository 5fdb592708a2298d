//! Row formatting shared by the table, CSV and JSON outputs.
//!
//! Numbers are formatted to strings once; every output mode renders those
//! same strings, so the modes agree digit for digit.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// A rectangular table of optional cells; `None` is an absent entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Option<String>>>,
}

impl Grid {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Grid {
        Grid {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Option<String>>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn write_table(&self, out: &mut dyn Write) -> io::Result<()> {
        let cell = |c: &Option<String>| c.clone().unwrap_or_else(|| "*".to_string());
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell(c).chars().count());
            }
        }
        let line = |cells: Vec<String>| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        writeln!(out, "{}", line(self.headers.clone()))?;
        let total = widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
        writeln!(out, "{}", "-".repeat(total))?;
        for row in &self.rows {
            writeln!(out, "{}", line(row.iter().map(cell).collect()))?;
        }
        Ok(())
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.as_deref().unwrap_or("")))?;
        }
        w.flush()
    }

    /// Rows as JSON objects keyed by `json_keys` (one per column).
    pub fn json_rows(&self, json_keys: &[&str]) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (key, c) in json_keys.iter().zip(row) {
                    let v = match c {
                        // integer columns stay numbers, reals stay strings
                        Some(s) if *key == "n" || *key == "q" || *key == "k" || *key == "cost" => s
                            .parse::<u64>()
                            .map(Value::from)
                            .unwrap_or_else(|_| Value::from(s.clone())),
                        Some(s) => Value::from(s.clone()),
                        None => Value::Null,
                    };
                    obj.insert((*key).to_string(), v);
                }
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Grid {
        let mut g = Grid::new(["n", "x_n", "sigma_n"]);
        g.push(vec![Some("0".into()), Some("5.0E+00".into()), None]);
        g.push(vec![
            Some("1".into()),
            Some("4.0E+00".into()),
            Some("0.0441".into()),
        ]);
        g
    }

    #[test]
    fn table_marks_absent_cells() {
        let mut buf = Vec::new();
        sample().write_table(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n      x_n  sigma_n");
        assert!(lines[2].ends_with('*'));
        assert!(lines[3].ends_with("0.0441"));
    }

    #[test]
    fn csv_leaves_absent_cells_empty() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,x_n,sigma_n\n0,5.0E+00,\n1,4.0E+00,0.0441\n"
        );
    }

    #[test]
    fn json_uses_null_and_strings() {
        let v = sample().json_rows(&["n", "x", "sigma"]);
        assert_eq!(v[0]["n"], 0);
        assert_eq!(v[0]["x"], "5.0E+00");
        assert!(v[0]["sigma"].is_null());
        assert_eq!(v[1]["sigma"], "0.0441");
    }
}

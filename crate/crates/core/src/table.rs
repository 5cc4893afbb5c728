//! Whitespace-delimited column files with `#` header lines.
//!
//! Numbers are written with a fixed `{:.16e}` format so identical inputs give
//! byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DatTable {
    /// Free-form comment lines (written after `# `).
    pub comments: Vec<String>,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl DatTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn comment(mut self, line: impl Into<String>) -> Self {
        self.comments.push(line.into());
        self
    }

    pub fn column(mut self, name: impl Into<String>, values: Vec<f64>) -> Self {
        self.columns.push((name.into(), values));
        self
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |(_, v)| v.len())
    }

    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn render(&self) -> Result<String> {
        let rows = self.rows();
        if let Some((name, _)) = self.columns.iter().find(|(_, v)| v.len() != rows) {
            return Err(Error::Contract(format!(
                "column {name} has a different length"
            )));
        }
        let mut out = String::new();
        for line in &self.comments {
            writeln!(out, "# {line}").unwrap();
        }
        let names: Vec<&str> = self.columns.iter().map(|(n, _)| n.as_str()).collect();
        writeln!(out, "# columns: {}", names.join(" ")).unwrap();
        for r in 0..rows {
            let cells: Vec<String> = self
                .columns
                .iter()
                .map(|(_, v)| format!("{:.16e}", v[r]))
                .collect();
            writeln!(out, "{}", cells.join(" ")).unwrap();
        }
        Ok(out)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render()?)?;
        Ok(())
    }

    /// Parse a file produced by [`DatTable::render`]. Column names come from
    /// the `# columns:` line; without one they are `c0, c1, ...`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut comments = Vec::new();
        let mut names: Option<Vec<String>> = None;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(cols) = rest.strip_prefix("columns:") {
                    names = Some(cols.split_whitespace().map(str::to_owned).collect());
                } else {
                    comments.push(rest.to_owned());
                }
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>().map_err(|e| {
                        Error::Config(format!("line {}: bad number {tok:?}: {e}", lineno + 1))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(Error::Config(format!("line {}: ragged row", lineno + 1)));
                }
            }
            rows.push(row);
        }
        let width = rows
            .first()
            .map_or(names.as_ref().map_or(0, Vec::len), Vec::len);
        let names = names.unwrap_or_else(|| (0..width).map(|k| format!("c{k}")).collect());
        if names.len() != width {
            return Err(Error::Config(format!(
                "header names {} columns, rows have {width}",
                names.len()
            )));
        }
        let columns = names
            .into_iter()
            .enumerate()
            .map(|(k, n)| (n, rows.iter().map(|r| r[k]).collect()))
            .collect();
        Ok(Self { comments, columns })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ragged_columns_rejected() {
        let t = DatTable::new().column("a", vec![1.0]).column("b", vec![]);
        assert!(t.render().is_err());
    }

    #[test]
    fn header_without_names() {
        let t = DatTable::parse("# hi\n1 2\n3 4\n").unwrap();
        assert_eq!(t.get("c1"), Some(&[2.0, 4.0][..]));
        assert_eq!(t.comments, vec!["hi".to_string()]);
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(xs in prop::collection::vec(-1e300f64..1e300, 0..20)) {
            let ys: Vec<f64> = xs.iter().map(|x| x * 0.5).collect();
            let t = DatTable::new().comment("k = 1").column("x", xs).column("y", ys);
            let back = DatTable::parse(&t.render().unwrap()).unwrap();
            prop_assert_eq!(back, t);
        }
    }
}

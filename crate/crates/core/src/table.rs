//! Column-oriented trajectory record with CSV serialization.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Uniformly sampled multi-column record. The first column is always `time`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryTable<T> {
    header: Vec<String>,
    columns: Vec<Vec<T>>,
}

impl<T: Scalar> TrajectoryTable<T> {
    pub fn new(header: Vec<String>) -> Result<Self> {
        if header.first().map(String::as_str) != Some("time") {
            return Err(Error::validation("header", "first column must be `time`"));
        }
        for (i, name) in header.iter().enumerate() {
            if header[..i].contains(name) {
                return Err(Error::validation("header", format!("duplicate column `{name}`")));
            }
            if name.is_empty() || name.contains([',', '\n', '"']) {
                return Err(Error::validation("header", format!("invalid column name `{name}`")));
            }
        }
        let columns = vec![Vec::new(); header.len()];
        Ok(Self { header, columns })
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn len(&self) -> usize {
        self.columns[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn push_row(&mut self, row: &[T]) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::DimensionMismatch { expected: self.header.len(), actual: row.len() });
        }
        for (col, &v) in self.columns.iter_mut().zip(row) {
            col.push(v);
        }
        Ok(())
    }

    pub fn time(&self) -> &[T] {
        &self.columns[0]
    }

    pub fn column(&self, name: &str) -> Result<&[T]> {
        self.header
            .iter()
            .position(|h| h == name)
            .map(|i| self.columns[i].as_slice())
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// Writes the table as CSV; numbers use the shortest representation that
    /// parses back to the same value.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        let mut line = String::new();
        for r in 0..self.len() {
            line.clear();
            for (c, col) in self.columns.iter().enumerate() {
                if c > 0 {
                    line.push(',');
                }
                line.push_str(&format!("{:?}", col[r]));
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let io = |e| Error::io("<csv>", e);
        let header_line = lines
            .next()
            .ok_or_else(|| Error::validation("csv", "missing header"))?
            .map_err(io)?;
        let header: Vec<String> = header_line.split(',').map(str::to_string).collect();
        let mut table = Self::new(header)?;
        for (i, line) in lines.enumerate() {
            let line = line.map_err(io)?;
            let row = line
                .split(',')
                .map(|field| {
                    field
                        .parse::<f64>()
                        .map(T::lit)
                        .map_err(|e| Error::validation("csv", format!("row {}: {e}", i + 2)))
                })
                .collect::<Result<Vec<T>>>()?;
            table.push_row(&row)?;
        }
        Ok(table)
    }
}

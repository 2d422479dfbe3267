//! Plain-text matrix format: a header line `rows cols`, then one line per row
//! with entries written as `p/q` or `p`, separated by whitespace.

use std::fmt::Write;
use std::str::FromStr;

use super::{Matrix, Scalar};
use crate::error::{Error, Result};

pub fn write_matrix<T: Scalar>(m: &Matrix<T>) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", m.rows(), m.cols()).unwrap();
    for i in 0..m.rows() {
        let line = m
            .row(i)
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(out, "{line}").unwrap();
    }
    out
}

pub fn parse_matrix<T>(text: &str) -> Result<Matrix<T>>
where
    T: Scalar + FromStr,
{
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad dimension `{t}`")))
        })
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Parse(format!(
            "header `{header}` is not `rows cols`"
        )));
    };
    let mut data = Vec::with_capacity(rows * cols);
    let mut seen_rows = 0;
    for (i, line) in lines.enumerate() {
        let before = data.len();
        for tok in line.split_whitespace() {
            let v = tok
                .parse::<T>()
                .map_err(|_| Error::Parse(format!("bad entry `{tok}` on row {}", i + 1)))?;
            data.push(v);
        }
        if data.len() - before != cols {
            return Err(Error::Parse(format!(
                "row {} has {} entries, expected {cols}",
                i + 1,
                data.len() - before
            )));
        }
        seen_rows += 1;
    }
    if seen_rows != rows {
        return Err(Error::Parse(format!(
            "expected {rows} rows, found {seen_rows}"
        )));
    }
    Matrix::from_vec(rows, cols, data)
}

//! Plain-text matrix dumps.
//!
//! First line `rows cols`, then one `i j v` line per nonzero entry with
//! 1-based indices, sorted by `(i, j)`. Every line ends in a newline.

use std::fmt::Write as _;

use num_bigint::BigInt;

use super::{IntMatrix, MatrixError};

pub fn write_triples(m: &IntMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", m.rows(), m.cols());
    for (i, j, v) in m.triples() {
        let _ = writeln!(out, "{} {} {}", i + 1, j + 1, v);
    }
    out
}

pub fn read_triples(text: &str) -> Result<IntMatrix, MatrixError> {
    let bad = |line: &str| MatrixError::Parse(line.to_string());
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad(""))?;
    let mut it = header.split_whitespace();
    let rows: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad(header))?;
    let cols: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad(header))?;
    let mut triples = Vec::new();
    for line in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [i, j, v] = parts.as_slice() else {
            return Err(bad(line));
        };
        let i: usize = i.parse().map_err(|_| bad(line))?;
        let j: usize = j.parse().map_err(|_| bad(line))?;
        let v: BigInt = v.parse().map_err(|_| bad(line))?;
        if i == 0 || j == 0 {
            return Err(bad(line));
        }
        triples.push((i - 1, j - 1, v));
    }
    IntMatrix::from_triples(rows, cols, triples)
}

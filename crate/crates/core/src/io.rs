//! Text formats for codes and received words.
//!
//! Codebook file: a header `q n S`, then `S` lines of `n` symbols in `1..=q`.
//! Linear-code file: a header `q n k`, then the `k` generator rows over
//! `0..q`. Blank lines and text after `#` are ignored in both.

use std::fmt::Write as _;
use std::path::Path;

use crate::channels::Channel;
use crate::codes::{Code, LinearCode, Symbol};
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = l.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn numbers(line: usize, tokens: &[&str]) -> Result<Vec<usize>> {
    tokens
        .iter()
        .map(|t| t.parse().map_err(|_| parse_err(line, format!("expected a non-negative integer, found {t:?}"))))
        .collect()
}

/// Data rows tagged with their line numbers.
type Rows = Vec<(usize, Vec<usize>)>;

/// The three header numbers and exactly as many rows as the third declares.
fn read_table(text: &str) -> Result<([usize; 3], Rows)> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let header = numbers(hl, &header)?;
    let [q, n, count]: [usize; 3] = header
        .try_into()
        .map_err(|_| parse_err(hl, "header must have three numbers"))?;
    let mut rows = Vec::with_capacity(count.min(1 << 20));
    for (l, tokens) in lines {
        let row = numbers(l, &tokens)?;
        if row.len() != n {
            return Err(parse_err(l, format!("expected {n} symbols, found {}", row.len())));
        }
        if rows.len() == count {
            return Err(parse_err(l, format!("more than the declared {count} rows")));
        }
        rows.push((l, row));
    }
    if rows.len() != count {
        return Err(parse_err(hl, format!("declared {count} rows, found {}", rows.len())));
    }
    Ok(([q, n, count], rows))
}

pub fn parse_code(text: &str) -> Result<Code> {
    let ([q, n, _], rows) = read_table(text)?;
    for (l, row) in &rows {
        if let Some(&s) = row.iter().find(|&&s| s == 0 || s > q) {
            return Err(parse_err(*l, format!("symbol {s} outside 1..={q}")));
        }
    }
    Code::from_one_based(q, n, rows.into_iter().map(|r| r.1).collect())
}

pub fn format_code(code: &Code) -> String {
    let mut out = format!("{} {} {}\n", code.q(), code.n(), code.len());
    for c in code.iter() {
        let line: Vec<String> = c.iter().map(|&s| (s + 1).to_string()).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

pub fn parse_linear_code(text: &str) -> Result<LinearCode> {
    let ([q, _, _], rows) = read_table(text)?;
    for (l, row) in &rows {
        if let Some(&s) = row.iter().find(|&&s| s >= q) {
            return Err(parse_err(*l, format!("generator entry {s} outside 0..{q}")));
        }
    }
    LinearCode::new(q, rows.into_iter().map(|(_, r)| r.into_iter().map(|s| s as Symbol).collect()).collect())
}

pub fn format_linear_code(code: &LinearCode) -> String {
    let mut out = format!("{} {} {}\n", code.q(), code.n(), code.k());
    for row in code.generator().to_rows() {
        let line: Vec<String> = row.iter().map(|s| s.to_string()).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

pub fn read_code(path: &Path) -> Result<Code> {
    parse_code(&std::fs::read_to_string(path)?)
}

pub fn read_linear_code(path: &Path) -> Result<LinearCode> {
    parse_linear_code(&std::fs::read_to_string(path)?)
}

/// Splits a received word into tokens: on whitespace or commas, or per
/// character when the word is a single run of exactly `n` characters.
pub fn observation_tokens(text: &str, n: usize) -> Vec<String> {
    let tokens: Vec<&str> = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.len() == 1 && n > 1 && tokens[0].chars().count() == n {
        tokens[0].chars().map(String::from).collect()
    } else {
        tokens.into_iter().map(String::from).collect()
    }
}

pub fn parse_observation<C: Channel>(channel: &C, text: &str, n: usize) -> Result<Vec<C::Output>> {
    let y: Vec<C::Output> = observation_tokens(text, n)
        .iter()
        .map(|t| channel.parse_output(t))
        .collect::<Result<_>>()?;
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: y.len(),
        });
    }
    Ok(y)
}

/// A binary word given as `0`/`1` tokens.
pub fn parse_binary_word(text: &str, n: usize) -> Result<Vec<Symbol>> {
    let y: Vec<Symbol> = observation_tokens(text, n)
        .iter()
        .map(|t| match t.as_str() {
            "0" => Ok(0),
            "1" => Ok(1),
            _ => Err(Error::ObservationOutOfAlphabet { observation: t.clone() }),
        })
        .collect::<Result<_>>()?;
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: y.len(),
        });
    }
    Ok(y)
}

/// Symbols as printed to users: bare bits for binary codes, else `1..=q`
/// separated by spaces.
pub fn format_word(word: &[Symbol], q: usize) -> String {
    if q == 2 {
        word.iter().map(|s| s.to_string()).collect()
    } else {
        word.iter().map(|s| (s + 1).to_string()).collect::<Vec<_>>().join(" ")
    }
}

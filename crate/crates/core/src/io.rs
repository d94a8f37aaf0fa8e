//! Plain-text code files.
//!
//! ```text
//! q=<q> n=<n> N=<N>
//! <n space-separated symbols>     (one codeword per line, N lines)
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::codes::{Alphabet, CodeMatrix};
use crate::error::{Error, Result};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn header_field(tok: Option<&str>, key: &str) -> Result<u64> {
    let tok = tok.ok_or_else(|| perr(1, format!("missing `{key}=` field")))?;
    let val = tok
        .strip_prefix(key)
        .and_then(|s| s.strip_prefix('='))
        .ok_or_else(|| perr(1, format!("expected `{key}=<value>`, found `{tok}`")))?;
    val.parse().map_err(|_| perr(1, format!("`{key}` is not a non-negative integer: `{val}`")))
}

pub fn parse_code(text: &str) -> Result<CodeMatrix> {
    let mut lines = text.split('\n');
    let header = lines.next().unwrap_or("");
    let mut toks = header.split(' ');
    let q = header_field(toks.next(), "q")?;
    let n = header_field(toks.next(), "n")? as usize;
    let big_n = header_field(toks.next(), "N")? as usize;
    if let Some(extra) = toks.next() {
        return Err(perr(1, format!("unexpected header token `{extra}`")));
    }
    if q < 2 {
        return Err(perr(1, "q must be at least 2"));
    }
    if n == 0 {
        return Err(perr(1, "n must be at least 1"));
    }
    if big_n == 0 {
        return Err(perr(1, "N must be at least 1"));
    }

    let mut data = Vec::with_capacity(n * big_n);
    for i in 0..big_n {
        let line_no = i + 2;
        let line = lines.next().ok_or_else(|| perr(line_no, format!("expected {big_n} codewords, file ends after {i}")))?;
        let before = data.len();
        for tok in line.split(' ') {
            let s: u64 = tok.parse().map_err(|_| perr(line_no, format!("bad symbol `{tok}`")))?;
            if s >= q {
                return Err(perr(line_no, format!("symbol {s} outside [0, {q})")));
            }
            data.push(s);
        }
        if data.len() - before != n {
            return Err(perr(line_no, format!("expected {n} symbols, found {}", data.len() - before)));
        }
    }
    // a trailing newline is allowed, nothing else
    for (k, rest) in lines.enumerate() {
        if !rest.is_empty() {
            return Err(perr(big_n + 2 + k, "trailing content after the last codeword"));
        }
    }
    CodeMatrix::from_flat(Alphabet::new(q)?, n, data)
}

pub fn format_code(code: &CodeMatrix) -> String {
    let mut out = format!("q={} n={} N={}\n", code.q(), code.n(), code.len());
    for word in code.codewords() {
        let row: Vec<String> = word.iter().map(u64::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn load_code(path: impl AsRef<Path>) -> Result<CodeMatrix> {
    parse_code(&fs::read_to_string(path)?)
}

pub fn save_code(code: &CodeMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(format_code(code).as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "q=3 n=2 N=3\n0 1\n2 2\n1 0\n";
        let c = parse_code(text).unwrap();
        assert_eq!(c.n(), 2);
        assert_eq!(c.codeword(1), &[2, 2]);
        assert_eq!(format_code(&c), text);
    }

    #[test]
    fn errors_name_the_line() {
        match parse_code("q=2 n=3 N=2\n0 0 1\n0 2 1\n") {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_code("q=2 n=3 N=0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_code("q=2 n=2 N=2\n0 0\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_code("q=2 n=2 N=1\n0 0 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_code("n=2 q=2 N=1\n0 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_code("q=2 n=2 N=1\n0 0\n1 1\n"), Err(Error::Parse { line: 3, .. })));
    }
}

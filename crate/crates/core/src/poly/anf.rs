//! The `.anf` text format.
//!
//! ```text
//! p <n> <m>
//! <poly 1>
//! …
//! <poly m>
//! ```
//!
//! Each polynomial line is a `+`-separated list of `1`, `x<i>` or
//! `x<i>*x<j>` with `1 ≤ i < j ≤ n`, or the single token `0`.

use std::collections::HashSet;

use super::{QuadraticPoly, QuadraticSystem};
use crate::error::{Error, Result};
use crate::monomial::Monomial;

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse(text: &str) -> Result<QuadraticSystem> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let (hline, header) = lines.next().ok_or_else(|| err(1, "empty input"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 || fields[0] != "p" {
        return Err(err(hline, "expected header `p <n> <m>`"));
    }
    let n: usize = fields[1]
        .parse()
        .map_err(|_| err(hline, format!("bad variable count `{}`", fields[1])))?;
    let m: usize = fields[2]
        .parse()
        .map_err(|_| err(hline, format!("bad equation count `{}`", fields[2])))?;
    if n == 0 || m == 0 {
        return Err(err(hline, "n and m must be at least 1"));
    }

    let mut polys = Vec::with_capacity(m);
    for (lineno, line) in lines {
        if polys.len() == m {
            if line.trim().is_empty() {
                continue;
            }
            return Err(err(lineno, format!("more than {m} polynomials")));
        }
        polys.push(parse_poly(line, n, lineno)?);
    }
    if polys.len() != m {
        return Err(err(
            polys.len() + 2,
            format!("expected {m} polynomials, found {}", polys.len()),
        ));
    }
    QuadraticSystem::new(n, polys)
}

fn parse_poly(line: &str, n: usize, lineno: usize) -> Result<QuadraticPoly> {
    let line = line.trim();
    if line == "0" {
        return QuadraticPoly::zero(n);
    }
    let mut seen = HashSet::new();
    let mut monomials = Vec::new();
    for token in line.split('+') {
        let token = token.trim();
        let mono = parse_monomial(token, n, lineno)?;
        if !seen.insert(mono) {
            return Err(err(lineno, format!("duplicate monomial `{token}`")));
        }
        monomials.push(mono);
    }
    QuadraticPoly::from_monomials(n, monomials)
}

fn parse_monomial(token: &str, n: usize, lineno: usize) -> Result<Monomial> {
    if token == "1" {
        return Ok(Monomial::ONE);
    }
    if token.is_empty() {
        return Err(err(lineno, "empty monomial"));
    }
    let mut vars = Vec::new();
    for factor in token.split('*') {
        let index = factor
            .strip_prefix('x')
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .ok_or_else(|| err(lineno, format!("malformed token `{token}`")))?;
        let i: usize = index
            .parse()
            .map_err(|_| err(lineno, format!("malformed token `{token}`")))?;
        if i == 0 || i > n {
            return Err(err(lineno, format!("variable x{i} out of range 1..={n}")));
        }
        vars.push(i);
    }
    match vars.as_slice() {
        [_] => {}
        [i, j] if i < j => {}
        [_, _] => {
            return Err(err(
                lineno,
                format!("indices must be strictly ascending within `{token}`"),
            ))
        }
        _ => return Err(err(lineno, format!("degree above 2 in `{token}`"))),
    }
    Ok(Monomial::from_vars(&vars))
}

/// Canonical text: header, then one line per polynomial with monomials in
/// descending grevlex order; LF line endings, trailing newline.
pub fn serialize(s: &QuadraticSystem) -> String {
    let mut out = format!("p {} {}\n", s.n(), s.m());
    for p in s.polys() {
        out.push_str(&p.to_string());
        out.push('\n');
    }
    out
}

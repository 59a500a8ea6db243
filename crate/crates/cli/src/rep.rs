//! Representation point files: one line `name = [[a, b], [c, d]]` per
//! algebra generator, entries integers or fractions.

use drep_core::repfun::{AlgebraPresentation, RepresentationPoint};
use drep_core::Q;

use crate::dsl::{is_identifier, ParseError};

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        msg: msg.into(),
    })
}

fn parse_rational(tok: &str, line: usize, col: usize) -> Result<Q, ParseError> {
    let (neg, body) = match tok.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, tok.strip_prefix('+').unwrap_or(tok)),
    };
    let (n, d) = match body.split_once('/') {
        Some((n, d)) => (n, d),
        None => (body, "1"),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(n) || !digits(d) {
        return err(line, col, format!("`{tok}` is not a rational number"));
    }
    let (n, d): (num_bigint::BigInt, num_bigint::BigInt) = (n.parse().unwrap(), d.parse().unwrap());
    if d == 0.into() {
        return err(line, col, "zero denominator");
    }
    let x = Q::new(n, d);
    Ok(if neg { -x } else { x })
}

/// `[[a, b], [c, d]]` as rows.
fn parse_matrix(text: &str, line: usize, col0: usize) -> Result<Vec<Vec<Q>>, ParseError> {
    let t = text.trim();
    let lead = text.len() - text.trim_start().len();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| ParseError {
            line,
            col: col0 + lead,
            msg: "expected a matrix `[[...], ...]`".into(),
        })?;
    let base = col0 + lead + 1;
    let mut rows = Vec::new();
    let mut pos = 0;
    let bytes = inner.as_bytes();
    loop {
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b',') {
            pos += 1;
        }
        if pos == bytes.len() {
            break;
        }
        if bytes[pos] != b'[' {
            return err(line, base + pos, "expected `[` opening a row");
        }
        let Some(close) = inner[pos..].find(']') else {
            return err(line, base + pos, "unterminated row");
        };
        let body = &inner[pos + 1..pos + close];
        let mut row = Vec::new();
        let mut off = pos + 1;
        for entry in body.split(',') {
            let lead = entry.len() - entry.trim_start().len();
            row.push(parse_rational(entry.trim(), line, base + off + lead)?);
            off += entry.len() + 1;
        }
        rows.push(row);
        pos += close + 1;
    }
    Ok(rows)
}

/// Parses a rep file against the algebra's generators, in declaration order.
pub fn parse_rep(text: &str, a: &AlgebraPresentation) -> Result<RepresentationPoint, ParseError> {
    let mut mats: Vec<Option<(Vec<Q>, usize)>> = vec![None; a.gens.len()];
    let mut dim = None;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        last = no;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let col = body.len() - body.trim_start().len() + 1;
        let Some((name, rhs)) = body.split_once('=') else {
            return err(no, col, "expected `name = [[...]]`");
        };
        let name = name.trim();
        if !is_identifier(name) {
            return err(no, col, format!("`{name}` is not an identifier"));
        }
        let Some(v) = a.gens.iter().position(|g| g.name == name) else {
            return err(no, col, format!("unknown algebra generator `{name}`"));
        };
        if mats[v].is_some() {
            return err(no, col, format!("matrix for `{name}` given twice"));
        }
        let rows = parse_matrix(rhs, no, body.find('=').unwrap() + 2)?;
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return err(no, col, format!("matrix for `{name}` must be square and nonempty"));
        }
        match dim {
            None => dim = Some(d),
            Some(e) if e != d => {
                return err(no, col, format!("matrix for `{name}` is {d}x{d}, expected {e}x{e}"))
            }
            _ => {}
        }
        mats[v] = Some((rows.into_iter().flatten().collect(), no));
    }
    let Some(dim) = dim else {
        return err(last.max(1), 1, "no matrices given");
    };
    let mut matrices = Vec::with_capacity(mats.len());
    for (g, m) in a.gens.iter().zip(mats) {
        match m {
            Some((m, _)) => matrices.push(m),
            None => return err(last.max(1), 1, format!("no matrix for generator `{}`", g.name)),
        }
    }
    Ok(RepresentationPoint { dim, matrices })
}

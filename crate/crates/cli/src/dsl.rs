//! The presentation file format.
//!
//! A file is a sequence of sections, each opened by a header line:
//!
//! ```text
//! algebra                  # gen NAME [deg 0] [wt W] / rel POLY
//! resolution               # gen NAME deg N [wt W] / d NAME = POLY
//! dga nc | dga comm        # same lines as a resolution
//! fdalgebra                # basis NAME [wt W] / unit NAME / mul A*B = LINCOMB
//! ```
//!
//! Polynomials are sums of terms joined by `+`/`-`; factors are joined by
//! `*` and may be integers, fractions `p/q`, generator names, `name^k`
//! (even generators of a commutative dga only), parenthesized sums, or
//! graded commutators `[a, b]`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use drep_core::cyclic::FinDimAlgebra;
use drep_core::linalg::SparseVec;
use drep_core::repfun::AlgebraPresentation;
use drep_core::{
    CommMonomial, DgPresentation, Flavor, Generator, Monomial, NcPoly, Poly, Var, Word, Q,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        msg: msg.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dga {
    Nc(DgPresentation<Word>),
    Comm(DgPresentation<CommMonomial>),
}

/// Parsed contents of a presentation file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PresentationFile {
    pub algebra: Option<AlgebraPresentation>,
    pub resolution: Option<DgPresentation<Word>>,
    pub dga: Option<Dga>,
    pub fdalgebra: Option<FinDimAlgebra>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SectionKind {
    Algebra,
    Resolution,
    DgaNc,
    DgaComm,
    FdAlgebra,
}

impl SectionKind {
    fn name(self) -> &'static str {
        match self {
            SectionKind::Algebra => "algebra",
            SectionKind::Resolution => "resolution",
            SectionKind::DgaNc => "dga nc",
            SectionKind::DgaComm => "dga comm",
            SectionKind::FdAlgebra => "fdalgebra",
        }
    }
}

/// One significant line: its number, the column of its first character and
/// the text with comments stripped.
#[derive(Clone, Debug)]
struct Line<'a> {
    no: usize,
    col: usize,
    text: &'a str,
}

struct Section<'a> {
    kind: SectionKind,
    header: usize,
    lines: Vec<Line<'a>>,
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse(text: &str) -> Result<PresentationFile, ParseError> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        let col = body.len() - trimmed.len() + 1;
        let trimmed = trimmed.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        let words: Vec<&str> = trimmed.split_whitespace().collect();
        let header = match words.as_slice() {
            ["algebra"] => Some(SectionKind::Algebra),
            ["resolution"] => Some(SectionKind::Resolution),
            ["fdalgebra"] => Some(SectionKind::FdAlgebra),
            ["dga", "nc"] => Some(SectionKind::DgaNc),
            ["dga", "comm"] => Some(SectionKind::DgaComm),
            ["dga", ..] => return err(no, col, "expected `dga nc` or `dga comm`"),
            _ => None,
        };
        match header {
            Some(kind) => {
                if let Some(prev) = sections.iter().find(|s| s.kind == kind) {
                    return err(
                        no,
                        col,
                        format!("section `{}` already opened on line {}", kind.name(), prev.header),
                    );
                }
                sections.push(Section {
                    kind,
                    header: no,
                    lines: Vec::new(),
                });
            }
            None => match sections.last_mut() {
                Some(s) => s.lines.push(Line {
                    no,
                    col,
                    text: trimmed,
                }),
                None => return err(no, col, "statement outside of a section"),
            },
        }
    }
    let mut file = PresentationFile::default();
    let mut algebra_lines: BTreeMap<String, usize> = BTreeMap::new();
    let mut resolution_header = 0;
    for s in &sections {
        match s.kind {
            SectionKind::Algebra => {
                let (a, lines) = parse_algebra(s)?;
                algebra_lines = lines;
                file.algebra = Some(a);
            }
            SectionKind::Resolution => {
                resolution_header = s.header;
                file.resolution = Some(parse_dg::<Word>(s)?);
            }
            SectionKind::DgaNc => {
                if file.dga.is_some() {
                    return err(s.header, 1, "only one dga section is allowed");
                }
                file.dga = Some(Dga::Nc(parse_dg::<Word>(s)?));
            }
            SectionKind::DgaComm => {
                if file.dga.is_some() {
                    return err(s.header, 1, "only one dga section is allowed");
                }
                file.dga = Some(Dga::Comm(parse_dg::<CommMonomial>(s)?));
            }
            SectionKind::FdAlgebra => file.fdalgebra = Some(parse_fdalgebra(s)?),
        }
    }
    if let (Some(a), Some(r)) = (&file.algebra, &file.resolution) {
        for g in &a.gens {
            let covered = r
                .gens()
                .iter()
                .any(|h| h.name == g.name && h.homdeg == 0);
            if !covered {
                let line = algebra_lines.get(&g.name).copied().unwrap_or(resolution_header);
                return err(
                    line,
                    1,
                    format!("algebra generator `{}` has no degree-0 counterpart in the resolution", g.name),
                );
            }
        }
    }
    Ok(file)
}

fn parse_number(tok: &str, line: usize, col: usize) -> Result<u32, ParseError> {
    tok.parse::<u32>()
        .or_else(|_| err(line, col, format!("expected a non-negative integer, found `{tok}`")))
}

/// `gen NAME [deg N] [wt W]`; returns the generator.
fn parse_gen(l: &Line, require_deg: bool) -> Result<Generator, ParseError> {
    let mut toks = Tokens::new(l);
    toks.keyword("gen")?;
    let (name, ncol) = toks.ident()?;
    let mut deg = None;
    let mut wt = None;
    while let Some((kw, c)) = toks.word() {
        let (val, vc) = toks.word().ok_or_else(|| ParseError {
            line: l.no,
            col: c,
            msg: format!("`{kw}` needs a value"),
        })?;
        let v = parse_number(val, l.no, vc)?;
        match kw {
            "deg" if deg.is_none() => deg = Some(v),
            "wt" if wt.is_none() => wt = Some(v),
            "deg" | "wt" => return err(l.no, c, format!("`{kw}` given twice")),
            _ => return err(l.no, c, format!("unexpected `{kw}`, expected `deg` or `wt`")),
        }
    }
    if require_deg && deg.is_none() {
        return err(l.no, ncol, format!("generator `{name}` needs `deg N`"));
    }
    let wt = wt.unwrap_or(1);
    if wt == 0 {
        return err(l.no, ncol, format!("generator `{name}` must have positive weight"));
    }
    Ok(Generator::new(name, deg.unwrap_or(0)).with_weight(wt))
}

fn push_gen(
    gens: &mut Vec<Generator>,
    lines: &mut BTreeMap<String, usize>,
    g: Generator,
    l: &Line,
) -> Result<(), ParseError> {
    if let Some(prev) = lines.get(&g.name) {
        return err(
            l.no,
            l.col,
            format!("duplicate generator `{}` (first declared on line {prev})", g.name),
        );
    }
    lines.insert(g.name.clone(), l.no);
    gens.push(g);
    Ok(())
}

fn parse_algebra(s: &Section) -> Result<(AlgebraPresentation, BTreeMap<String, usize>), ParseError> {
    let mut gens = Vec::new();
    let mut lines = BTreeMap::new();
    for l in s.lines.iter().filter(|l| first_word(l.text) == "gen") {
        let g = parse_gen(l, false)?;
        if g.homdeg != 0 {
            return err(l.no, l.col, "algebra generators have degree 0");
        }
        push_gen(&mut gens, &mut lines, g, l)?;
    }
    let mut rels = Vec::new();
    for l in &s.lines {
        match first_word(l.text) {
            "gen" => {}
            "rel" => {
                let rest = &l.text[3..];
                let p = PolyParser::<Word>::new(l, 3, rest, &gens).parse()?;
                rels.push(p);
            }
            w => return err(l.no, l.col, format!("unexpected `{w}` in an algebra section")),
        }
    }
    let a = AlgebraPresentation::new(gens, rels).map_err(|e| ParseError {
        line: s.header,
        col: 1,
        msg: e.to_string(),
    })?;
    Ok((a, lines))
}

fn parse_dg<M: Monomial>(s: &Section) -> Result<DgPresentation<M>, ParseError> {
    let mut gens = Vec::new();
    let mut lines = BTreeMap::new();
    for l in s.lines.iter().filter(|l| first_word(l.text) == "gen") {
        push_gen(&mut gens, &mut lines, parse_gen(l, true)?, l)?;
    }
    let mut diffs: Vec<Option<Poly<M>>> = vec![None; gens.len()];
    for l in &s.lines {
        match first_word(l.text) {
            "gen" => {}
            "d" => {
                let mut toks = Tokens::new(l);
                toks.keyword("d")?;
                let (name, ncol) = toks.ident()?;
                let eq = toks.expect_char('=')?;
                let Some(v) = gens.iter().position(|g| g.name == name) else {
                    return err(l.no, ncol, format!("unknown generator `{name}`"));
                };
                if diffs[v].is_some() {
                    return err(l.no, ncol, format!("differential of `{name}` given twice"));
                }
                let offset = eq + 1;
                let rest = &l.text[offset..];
                let expr_col = l.col + offset + rest.len() - rest.trim_start().len();
                let p = PolyParser::<M>::new(l, offset, &l.text[offset..], &gens).parse()?;
                let expected = gens[v].homdeg as i64 - 1;
                for (m, _) in p.terms() {
                    let h = m.homdeg(&gens);
                    if h as i64 != expected {
                        return err(
                            l.no,
                            expr_col,
                            format!(
                                "degree mismatch: d({name}) must have degree {expected}, found a term of degree {h}"
                            ),
                        );
                    }
                }
                diffs[v] = Some(p);
            }
            w => {
                return err(
                    l.no,
                    l.col,
                    format!("unexpected `{w}` in a `{}` section", s.kind.name()),
                )
            }
        }
    }
    let diffs = diffs.into_iter().map(Option::unwrap_or_default).collect();
    DgPresentation::new(gens, diffs).map_err(|e| ParseError {
        line: s.header,
        col: 1,
        msg: e.to_string(),
    })
}

fn parse_fdalgebra(s: &Section) -> Result<FinDimAlgebra, ParseError> {
    let mut names: Vec<String> = Vec::new();
    let mut weights: Vec<Option<u32>> = Vec::new();
    let mut unit = None;
    for l in &s.lines {
        let mut toks = Tokens::new(l);
        match first_word(l.text) {
            "basis" => {
                toks.keyword("basis")?;
                let (name, c) = toks.ident()?;
                if names.contains(&name) {
                    return err(l.no, c, format!("duplicate basis element `{name}`"));
                }
                let wt = match toks.word() {
                    None => None,
                    Some(("wt", _)) => {
                        let (v, vc) = toks.word().ok_or_else(|| ParseError {
                            line: l.no,
                            col: c,
                            msg: "`wt` needs a value".into(),
                        })?;
                        Some(parse_number(v, l.no, vc)?)
                    }
                    Some((w, wc)) => return err(l.no, wc, format!("unexpected `{w}`")),
                };
                toks.end()?;
                names.push(name);
                weights.push(wt);
            }
            "unit" => {
                toks.keyword("unit")?;
                let (name, c) = toks.ident()?;
                toks.end()?;
                if unit.is_some() {
                    return err(l.no, c, "unit given twice");
                }
                unit = Some((name, l.no, c));
            }
            "mul" => {}
            w => return err(l.no, l.col, format!("unexpected `{w}` in a fdalgebra section")),
        }
    }
    let Some((unit_name, ul, uc)) = unit else {
        return err(s.header, 1, "fdalgebra needs a `unit NAME` line");
    };
    let Some(u) = names.iter().position(|n| *n == unit_name) else {
        return err(ul, uc, format!("unknown basis element `{unit_name}`"));
    };
    let n = names.len();
    let basis_gens: Vec<Generator> = names.iter().map(|nm| Generator::new(nm.clone(), 0)).collect();
    let mut mult = vec![vec![SparseVec::new(); n]; n];
    let mut given = vec![vec![false; n]; n];
    for i in 0..n {
        mult[u][i] = [(i, Q::one())].into_iter().collect();
        mult[i][u] = [(i, Q::one())].into_iter().collect();
    }
    for l in s.lines.iter().filter(|l| first_word(l.text) == "mul") {
        let mut toks = Tokens::new(l);
        toks.keyword("mul")?;
        let (a, ac) = toks.ident()?;
        toks.expect_char('*')?;
        let (b, bc) = toks.ident()?;
        let eq = toks.expect_char('=')?;
        let find = |nm: &str, c: usize| {
            names
                .iter()
                .position(|x| x == nm)
                .ok_or_else(|| ParseError {
                    line: l.no,
                    col: c,
                    msg: format!("unknown basis element `{nm}`"),
                })
        };
        let (i, j) = (find(&a, ac)?, find(&b, bc)?);
        if given[i][j] {
            return err(l.no, ac, format!("product {a}*{b} given twice"));
        }
        given[i][j] = true;
        let offset = eq + 1;
        let p = PolyParser::<Word>::new(l, offset, &l.text[offset..], &basis_gens).parse()?;
        let mut v = SparseVec::new();
        for (w, c) in p.terms() {
            if w.len() != 1 {
                return err(
                    l.no,
                    l.col + offset,
                    "a product must be a linear combination of basis elements",
                );
            }
            v.insert(w.letters()[0] as usize, c.clone());
        }
        if (i == u || j == u) && v != mult[i][j] {
            return err(l.no, ac, "products with the unit are fixed by the unit law");
        }
        mult[i][j] = v;
    }
    let weights = if weights.iter().any(Option::is_some) {
        Some(
            weights
                .iter()
                .enumerate()
                .map(|(i, w)| w.unwrap_or(if i == u { 0 } else { 1 }))
                .collect(),
        )
    } else {
        None
    };
    FinDimAlgebra::new(names, mult, u, weights).map_err(|e| ParseError {
        line: s.header,
        col: 1,
        msg: e.to_string(),
    })
}

fn first_word(s: &str) -> &str {
    s.split_whitespace().next().unwrap_or("")
}

/// Whitespace-separated tokens of a statement, with columns.
struct Tokens<'a> {
    line: &'a Line<'a>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(line: &'a Line<'a>) -> Self {
        Tokens { line, pos: 0 }
    }

    fn col(&self) -> usize {
        self.line.col + self.pos
    }

    fn skip_ws(&mut self) {
        let rest = &self.line.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Next run of identifier characters (or any non-space run).
    fn word(&mut self) -> Option<(&'a str, usize)> {
        self.skip_ws();
        let text: &'a str = self.line.text;
        let rest = &text[self.pos..];
        if rest.is_empty() {
            return None;
        }
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '/' || c == '-'))
            .unwrap_or(rest.len())
            .max(1);
        let col = self.col();
        self.pos += len;
        Some((&rest[..len], col))
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.word() {
            Some((w, _)) if w == kw => Ok(()),
            Some((w, c)) => err(self.line.no, c, format!("expected `{kw}`, found `{w}`")),
            None => err(self.line.no, self.col(), format!("expected `{kw}`")),
        }
    }

    fn ident(&mut self) -> Result<(String, usize), ParseError> {
        match self.word() {
            Some((w, c)) if is_identifier(w) => Ok((w.to_string(), c)),
            Some((w, c)) => err(self.line.no, c, format!("expected an identifier, found `{w}`")),
            None => err(self.line.no, self.col(), "expected an identifier"),
        }
    }

    /// Consumes `ch`; returns the byte offset just before it.
    fn expect_char(&mut self, ch: char) -> Result<usize, ParseError> {
        self.skip_ws();
        if self.line.text[self.pos..].starts_with(ch) {
            let at = self.pos;
            self.pos += ch.len_utf8();
            Ok(at)
        } else {
            err(self.line.no, self.col(), format!("expected `{ch}`"))
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.pos < self.line.text.len() {
            err(self.line.no, self.col(), "unexpected trailing input")
        } else {
            Ok(())
        }
    }
}

/// Recursive-descent parser for one polynomial expression.
pub struct PolyParser<'a, M: Monomial> {
    line: usize,
    col0: usize,
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    gens: &'a [Generator],
    _m: std::marker::PhantomData<M>,
}

impl<'a, M: Monomial> PolyParser<'a, M> {
    fn new(l: &Line, offset: usize, text: &'a str, gens: &'a [Generator]) -> Self {
        PolyParser {
            line: l.no,
            col0: l.col + offset,
            src: text.as_bytes(),
            text,
            pos: 0,
            gens,
            _m: std::marker::PhantomData,
        }
    }

    /// Parser for a standalone expression, columns counted from 1.
    pub fn standalone(text: &'a str, gens: &'a [Generator]) -> Self {
        PolyParser {
            line: 1,
            col0: 1,
            src: text.as_bytes(),
            text,
            pos: 0,
            gens,
            _m: std::marker::PhantomData,
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        err(self.line, self.col0 + self.pos, msg)
    }

    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    pub fn parse(mut self) -> Result<Poly<M>, ParseError> {
        if self.peek().is_none() {
            return self.error("expected an expression");
        }
        let p = self.sum()?;
        match self.peek() {
            None => Ok(p),
            Some(c) => self.error(format!("unexpected `{}`", c as char)),
        }
    }

    fn sum(&mut self) -> Result<Poly<M>, ParseError> {
        let mut acc = Poly::zero();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -Q::one()
            }
            Some(b'+') => {
                self.pos += 1;
                Q::one()
            }
            _ => Q::one(),
        };
        loop {
            let t = self.product()?;
            acc.add_scaled(&t, &sign);
            sign = match self.peek() {
                Some(b'+') => Q::one(),
                Some(b'-') => -Q::one(),
                _ => return Ok(acc),
            };
            self.pos += 1;
        }
    }

    fn product(&mut self) -> Result<Poly<M>, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f, self.gens);
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected an integer");
        }
        Ok(self.text[start..self.pos].parse().expect("digits"))
    }

    fn factor(&mut self) -> Result<Poly<M>, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let d = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        return self.error("expected a denominator");
                    }
                    let d = self.integer()?;
                    if d.is_zero() {
                        return self.error("zero denominator");
                    }
                    d
                } else {
                    BigInt::one()
                };
                Ok(Poly::constant(Q::new(n, d)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                let Some(v) = self.gens.iter().position(|g| g.name == name) else {
                    self.pos = start;
                    return self.error(format!("unknown generator `{name}`"));
                };
                let x = Poly::<M>::var(v as Var);
                if self.peek() != Some(b'^') {
                    return Ok(x);
                }
                if M::FLAVOR != Flavor::GradedCommutative || self.gens[v].is_odd() {
                    return self.error("`^` is only allowed on even generators of a commutative dga");
                }
                self.pos += 1;
                self.peek();
                let e = self.integer()?;
                let e: u32 = match e.try_into() {
                    Ok(e) => e,
                    Err(_) => return self.error("exponent too large"),
                };
                let mut acc = Poly::one();
                for _ in 0..e {
                    acc = acc.mul(&x, self.gens);
                }
                Ok(acc)
            }
            Some(b'(') => {
                self.pos += 1;
                let p = self.sum()?;
                if self.peek() != Some(b')') {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(p)
            }
            Some(b'[') => {
                self.pos += 1;
                let start = self.pos;
                let a = self.sum()?;
                if self.peek() != Some(b',') {
                    return self.error("expected `,`");
                }
                self.pos += 1;
                let b = self.sum()?;
                if self.peek() != Some(b']') {
                    return self.error("expected `]`");
                }
                self.pos += 1;
                let parity = |p: &Poly<M>| -> Option<u32> {
                    if p.is_zero() {
                        Some(0)
                    } else {
                        p.homdeg(self.gens).map(|h| h % 2)
                    }
                };
                let (Some(da), Some(db)) = (parity(&a), parity(&b)) else {
                    self.pos = start;
                    return self.error("commutator arguments must be homogeneous");
                };
                let ab = a.mul(&b, self.gens);
                let ba = b.mul(&a, self.gens);
                Ok(if da * db == 1 { &ab + &ba } else { &ab - &ba })
            }
            Some(c) => self.error(format!("unexpected `{}`", c as char)),
            None => self.error("unexpected end of expression"),
        }
    }
}

/// Parses a polynomial over `gens`, for callers outside presentation files.
pub fn parse_poly<M: Monomial>(text: &str, gens: &[Generator]) -> Result<Poly<M>, ParseError> {
    PolyParser::<M>::standalone(text, gens).parse()
}

fn write_gens(out: &mut String, gens: &[Generator]) {
    for g in gens {
        let _ = writeln!(out, "gen {} deg {} wt {}", g.name, g.homdeg, g.weight);
    }
}

fn write_dg<M: Monomial>(out: &mut String, header: &str, p: &DgPresentation<M>) {
    let _ = writeln!(out, "{header}");
    write_gens(out, p.gens());
    for (i, g) in p.gens().iter().enumerate() {
        let dg = p.d_of(i as Var);
        if !dg.is_zero() {
            let _ = writeln!(out, "d {} = {}", g.name, p.display_poly(dg));
        }
    }
}

/// Canonical text of a file; `parse` of the output reproduces the input.
pub fn print(file: &PresentationFile) -> String {
    let mut out = String::new();
    let sep = |out: &mut String| {
        if !out.is_empty() {
            out.push('\n');
        }
    };
    if let Some(a) = &file.algebra {
        sep(&mut out);
        out.push_str("algebra\n");
        write_gens(&mut out, &a.gens);
        for r in &a.relations {
            let _ = writeln!(out, "rel {}", r.display(&a.gens));
        }
    }
    if let Some(r) = &file.resolution {
        sep(&mut out);
        write_dg(&mut out, "resolution", r);
    }
    match &file.dga {
        Some(Dga::Nc(p)) => {
            sep(&mut out);
            write_dg(&mut out, "dga nc", p);
        }
        Some(Dga::Comm(p)) => {
            sep(&mut out);
            write_dg(&mut out, "dga comm", p);
        }
        None => {}
    }
    if let Some(a) = &file.fdalgebra {
        sep(&mut out);
        out.push_str("fdalgebra\n");
        for i in 0..a.dim() {
            match a.weights() {
                Some(w) => {
                    let _ = writeln!(out, "basis {} wt {}", a.names()[i], w[i]);
                }
                None => {
                    let _ = writeln!(out, "basis {}", a.names()[i]);
                }
            }
        }
        let _ = writeln!(out, "unit {}", a.names()[a.unit()]);
        let gens: Vec<Generator> = a.names().iter().map(|n| Generator::new(n.clone(), 0)).collect();
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                if i == a.unit() || j == a.unit() || a.product(i, j).is_empty() {
                    continue;
                }
                let p = NcPoly::from_terms(
                    a.product(i, j)
                        .iter()
                        .map(|(&k, c)| (Word(vec![k as Var]), c.clone())),
                );
                let _ = writeln!(out, "mul {}*{} = {}", a.names()[i], a.names()[j], p.display(&gens));
            }
        }
    }
    out
}

/// Wrapper giving `Display` to the canonical printer.
pub struct Printed<'a>(pub &'a PresentationFile);

impl fmt::Display for Printed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use drep_core::poly::{q, q_frac};

    const EX2D: &str = "\
# the commutative plane
algebra
  gen x
  gen y
  rel x*y - y*x

resolution
  gen x deg 0
  gen y deg 0
  gen t deg 1 wt 2
  d t = x*y - y*x
";

    #[test]
    fn parses_plane() {
        let f = parse(EX2D).unwrap();
        let r = f.resolution.as_ref().unwrap();
        assert_eq!(r.gens().len(), 3);
        assert_eq!(r.gens()[2].weight, 2);
        assert_eq!(r.display_poly(r.d_of(2)).to_string(), "x*y - y*x");
        assert_eq!(f.algebra.as_ref().unwrap().relations.len(), 1);
        assert!(r.check_d_squared().passed());
    }

    #[test]
    fn round_trip() {
        let f = parse(EX2D).unwrap();
        let printed = print(&f);
        assert_eq!(parse(&printed).unwrap(), f);
        assert_eq!(print(&parse(&printed).unwrap()), printed);
    }

    #[test]
    fn rejects_degree_mismatch_with_location() {
        let src = "resolution\ngen t deg 1\ngen x deg 1\nd t = x\n";
        let e = parse(src).unwrap_err();
        assert_eq!((e.line, e.col), (4, 7));
        assert!(e.msg.contains("degree"), "{}", e.msg);
    }

    #[test]
    fn rational_coefficients() {
        let src = "dga nc\ngen x deg 0\ngen y deg 0\ngen t deg 1\nd t = 1/2*x*y - 3/4*y*x\n";
        let f = parse(src).unwrap();
        let Some(Dga::Nc(p)) = f.dga else { panic!() };
        let dt = p.d_of(2);
        assert_eq!(dt.coeff(&Word(vec![0, 1])), q_frac(1, 2));
        assert_eq!(dt.coeff(&Word(vec![1, 0])), q_frac(-3, 4));
    }

    #[test]
    fn duplicate_generator() {
        let e = parse("resolution\ngen x deg 0\n  gen x deg 0\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 3));
        assert!(e.msg.contains("duplicate"));
    }

    #[test]
    fn syntax_errors_carry_columns() {
        let e = parse("dga nc\ngen x deg 0\ngen t deg 1\nd t = x * * x\n").unwrap_err();
        assert_eq!((e.line, e.col), (4, 11));
        let e = parse("gen x deg 0\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse("dga nc\ngen x deg 0\ngen t deg 1\nd t = z\n").unwrap_err();
        assert!(e.msg.contains("unknown generator `z`"));
        assert_eq!(e.col, 7);
    }

    #[test]
    fn powers_only_on_even_commutative() {
        let comm = "dga comm\ngen x deg 0\ngen u deg 1\ngen t deg 1\nd t = x^3\n";
        let f = parse(comm).unwrap();
        let Some(Dga::Comm(p)) = &f.dga else { panic!() };
        assert_eq!(p.display_poly(p.d_of(2)).to_string(), "x^3");
        assert_eq!(parse(&print(&f)).unwrap(), f);
        assert!(parse("dga nc\ngen x deg 0\ngen t deg 1\nd t = x^2\n").is_err());
        assert!(parse("dga comm\ngen u deg 1\ngen t deg 3\nd t = u^2\n").is_err());
    }

    #[test]
    fn graded_commutators() {
        let src = "dga nc\ngen x deg 0\ngen u deg 1\ngen v deg 1\ngen s deg 3\nd s = [u, [x, v]]\n";
        let f = parse(src).unwrap();
        let Some(Dga::Nc(p)) = &f.dga else { panic!() };
        // [u, xv − vx] with both odd: u(xv − vx) + (xv − vx)u
        let expected = parse_poly::<Word>("u*x*v - u*v*x + x*v*u - v*x*u", p.gens()).unwrap();
        assert_eq!(p.d_of(3), &expected);
        assert_eq!(p.d_of(3).len(), 4);
    }

    #[test]
    fn algebra_must_be_covered() {
        let src = "algebra\ngen x\ngen z\nresolution\ngen x deg 0\n";
        let e = parse(src).unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn fdalgebra_round_trip() {
        let src = "fdalgebra\nbasis one wt 0\nbasis eps wt 1\nunit one\n";
        let f = parse(src).unwrap();
        let a = f.fdalgebra.as_ref().unwrap();
        assert_eq!(a, &FinDimAlgebra::dual_numbers().clone_with_names(&["one", "eps"]));
        assert_eq!(parse(&print(&f)).unwrap(), f);
        let kk = parse("fdalgebra\nbasis one\nbasis e\nunit one\nmul e*e = e\n").unwrap();
        let a = kk.fdalgebra.as_ref().unwrap();
        assert_eq!(a.product(1, 1), &[(1, q(1))].into_iter().collect::<SparseVec>());
        assert_eq!(parse(&print(&kk)).unwrap(), kk);
        assert!(parse("fdalgebra\nbasis one\nbasis e\nunit one\nmul one*e = 0\n").is_err());
        assert!(parse("fdalgebra\nbasis one\nbasis e\nunit one\nmul e*e = 2*one\n").is_ok());
    }

    trait CloneWithNames {
        fn clone_with_names(&self, names: &[&str]) -> FinDimAlgebra;
    }

    impl CloneWithNames for FinDimAlgebra {
        fn clone_with_names(&self, names: &[&str]) -> FinDimAlgebra {
            let n = self.dim();
            let mult = (0..n)
                .map(|i| (0..n).map(|j| self.product(i, j).clone()).collect())
                .collect();
            FinDimAlgebra::new(
                names.iter().map(|s| s.to_string()).collect(),
                mult,
                self.unit(),
                self.weights().map(<[u32]>::to_vec),
            )
            .unwrap()
        }
    }
}

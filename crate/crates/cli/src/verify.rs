//! Golden verification targets.
//!
//! Each target reads a committed expectation file made of directive lines
//! (`input NAME`, `dim D`) and check lines `LABEL => EXPECTED`. Expected
//! values come only from the file; the engine computes the actual side.

use std::io::Write;

use anyhow::{anyhow, bail, Context};
use drep_core::ainfty::build;
use drep_core::cyclic::{norm_check, CyclicChain};
use drep_core::forms::{qper1_exactness, tangent_complex};
use drep_core::homology::{homology_cell, is_boundary};
use drep_core::{CommMonomial, Limits, NcPoly, Word};
use rayon::prelude::*;

use crate::commands::{homology_cells, nc_input, rv};
use crate::dsl::{parse_poly, PresentationFile};
use crate::report::{strings, table};
use crate::{example, rep, Status};

pub const TARGETS: &[(&str, &str)] = &[
    ("ex2d-d1", include_str!("../golden/verify/ex2d-d1.txt")),
    ("ex2d-d2", include_str!("../golden/verify/ex2d-d2.txt")),
    ("ex3d-d1", include_str!("../golden/verify/ex3d-d1.txt")),
    ("tq-dual-numbers", include_str!("../golden/verify/tq-dual-numbers.txt")),
    ("traces-ex41", include_str!("../golden/verify/traces-ex41.txt")),
    ("qper1-exactness", include_str!("../golden/verify/qper1-exactness.txt")),
    ("tangent-kxy", include_str!("../golden/verify/tangent-kxy.txt")),
];

/// A parsed expectation file.
#[derive(Clone, Debug, Default)]
pub struct Golden {
    pub input: String,
    pub dim: Option<usize>,
    pub checks: Vec<(String, String)>,
}

pub fn parse_golden(text: &str) -> anyhow::Result<Golden> {
    let mut g = Golden::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((lhs, rhs)) = line.split_once("=>") {
            g.checks.push((lhs.trim().to_string(), rhs.trim().to_string()));
        } else if let Some(name) = line.strip_prefix("input ") {
            g.input = name.trim().to_string();
        } else if let Some(d) = line.strip_prefix("dim ") {
            g.dim = Some(d.trim().parse().with_context(|| format!("line {}: bad dim", i + 1))?);
        } else {
            bail!("line {}: unrecognized `{line}`", i + 1);
        }
    }
    if g.input.is_empty() {
        bail!("expectation file names no input");
    }
    Ok(g)
}

/// One compared value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

fn outcome(label: &str, expected: &str, actual: String) -> Outcome {
    Outcome {
        label: label.to_string(),
        expected: expected.to_string(),
        ok: normalize(expected) == normalize(&actual),
        actual,
    }
}

fn normalize(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

fn load_input(g: &Golden) -> anyhow::Result<PresentationFile> {
    let text = example(&g.input).ok_or_else(|| anyhow!("unknown bundled input `{}`", g.input))?;
    Ok(crate::dsl::parse(text)?)
}

fn numbers(s: &str) -> anyhow::Result<Vec<usize>> {
    s.split_whitespace()
        .map(|t| t.parse::<usize>().with_context(|| format!("`{t}` is not a number")))
        .collect()
}

/// Runs a target and returns its outcomes.
pub fn evaluate(name: &str, limits: &Limits) -> anyhow::Result<Vec<Outcome>> {
    let text = TARGETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| {
            let names: Vec<&str> = TARGETS.iter().map(|(n, _)| *n).collect();
            anyhow!("unknown target `{name}` (known: {})", names.join(", "))
        })?;
    evaluate_text(name, text, limits)
}

pub fn evaluate_text(name: &str, text: &str, limits: &Limits) -> anyhow::Result<Vec<Outcome>> {
    let g = parse_golden(text)?;
    let f = load_input(&g)?;
    match name {
        "ex2d-d1" | "ex2d-d2" | "ex3d-d1" => homology_target(&g, &f, limits),
        "tq-dual-numbers" => norm_target(&g, &f, limits),
        "traces-ex41" => traces_target(&g, &f, limits),
        "qper1-exactness" => qper1_target(&g, &f, limits),
        "tangent-kxy" => tangent_target(&g, &f),
        _ => bail!("no evaluator for `{name}`"),
    }
}

pub fn run(name: &str, limits: &Limits, out: &mut dyn Write) -> anyhow::Result<Status> {
    let outcomes = evaluate(name, limits)?;
    let rows: Vec<Vec<String>> = outcomes
        .iter()
        .map(|o| {
            strings([
                o.label.clone(),
                o.expected.clone(),
                o.actual.clone(),
                if o.ok { "ok" } else { "MISMATCH" }.to_string(),
            ])
        })
        .collect();
    writeln!(out, "verify {name}")?;
    write!(out, "{}", table(&strings(["check", "expected", "actual", ""]), &rows))?;
    let ok = outcomes.iter().all(|o| o.ok);
    writeln!(out, "{}", if ok { "verified" } else { "verification FAILED" })?;
    Ok(Status::from_bool(ok))
}

fn dim_of(g: &Golden) -> anyhow::Result<usize> {
    g.dim.ok_or_else(|| anyhow!("expectation file needs `dim D`"))
}

/// `H<n> => dims at weights 0, 1, …` and
/// `span H<n> w=<w> => <element of R_V>` (the cell is one-dimensional and
/// the element is a cycle that is not a boundary).
fn homology_target(g: &Golden, f: &PresentationFile, limits: &Limits) -> anyhow::Result<Vec<Outcome>> {
    let p = rv(f, dim_of(g)?)?;
    let mut rows: Vec<(u32, Vec<usize>)> = Vec::new();
    for (label, value) in &g.checks {
        if let Some(n) = label.strip_prefix('H') {
            rows.push((n.parse().with_context(|| format!("bad label `{label}`"))?, numbers(value)?));
        }
    }
    let n_max = rows.iter().map(|r| r.0).max().unwrap_or(0);
    let w_max = rows.iter().map(|r| r.1.len() as u32).max().unwrap_or(1).saturating_sub(1);
    let cells = homology_cells(&p, n_max, w_max, 0, limits)?;
    let cell = |n: u32, w: u32| &cells[(n * (w_max + 1) + w) as usize].1;
    let mut out = Vec::new();
    for (label, value) in &g.checks {
        if let Some(n) = label.strip_prefix('H') {
            let n: u32 = n.parse()?;
            let len = numbers(value)?.len() as u32;
            let actual: Vec<String> = (0..len)
                .map(|w| {
                    let c = cell(n, w);
                    if c.valid { c.dim.to_string() } else { format!("{}?", c.dim) }
                })
                .collect();
            out.push(outcome(label, value, actual.join(" ")));
        } else if let Some(spec) = label.strip_prefix("span ") {
            let (h, w) = spec
                .split_once(" w=")
                .ok_or_else(|| anyhow!("bad label `{label}`"))?;
            let n: u32 = h.trim_start_matches('H').parse()?;
            let w: u32 = w.parse()?;
            let z = parse_poly::<CommMonomial>(value, p.gens())?;
            let cycle = p.apply_d(&z)?.is_zero();
            let boundary = is_boundary(&p, &z, 0, limits)?.is_boundary();
            let bideg = z.bidegree(p.gens()) == Some((n, w));
            let c = homology_cell(&p, n, w, 0, limits)?;
            let spans = cycle && !boundary && bideg && c.valid && c.dim == 1;
            let actual = if spans {
                value.clone()
            } else {
                format!("cycle={cycle} boundary={boundary} dim={}", c.dim)
            };
            out.push(outcome(label, value, actual));
        } else {
            bail!("unrecognized check `{label}`");
        }
    }
    Ok(out)
}

/// `N<n> => cc rank invariants passed|failed` for the norm map on `A^{⊗n}`.
fn norm_target(g: &Golden, f: &PresentationFile, limits: &Limits) -> anyhow::Result<Vec<Outcome>> {
    let a = f.fdalgebra.as_ref().ok_or_else(|| anyhow!("input has no fdalgebra"))?;
    let mut ns = Vec::new();
    for (label, _) in &g.checks {
        ns.push(label.strip_prefix('N').ok_or_else(|| anyhow!("bad label `{label}`"))?.parse::<usize>()?);
    }
    let checks = norm_check(a, ns.iter().copied().max().unwrap_or(1), limits)?;
    let mut out = Vec::new();
    for ((label, value), n) in g.checks.iter().zip(ns) {
        let c = checks.iter().find(|c| c.n == n).ok_or_else(|| anyhow!("no norm check at n = {n}"))?;
        let actual = format!(
            "{} {} {} {}",
            c.cc_dim,
            c.rank,
            c.invariant_dim,
            if c.passed() { "passed" } else { "failed" }
        );
        out.push(outcome(label, value, actual));
    }
    Ok(out)
}

/// `T1 A | B => EXPR`: `T_1(A, B)` equals `Tr(EXPR)` modulo boundaries of
/// `R_V`, with `A`, `B` words in the degree-0 generators and `EXPR` a
/// polynomial in the resolution.
fn traces_target(g: &Golden, f: &PresentationFile, limits: &Limits) -> anyhow::Result<Vec<Outcome>> {
    let r = nc_input(f)?;
    let dim = dim_of(g)?;
    let mut parsed = Vec::new();
    for (label, value) in &g.checks {
        let args = label.strip_prefix("T1 ").ok_or_else(|| anyhow!("bad label `{label}`"))?;
        let (a, b) = args.split_once('|').ok_or_else(|| anyhow!("bad label `{label}`"))?;
        let a = parse_poly::<Word>(a.trim(), r.gens())?;
        let b = parse_poly::<Word>(b.trim(), r.gens())?;
        let e = parse_poly::<Word>(value, r.gens())?;
        parsed.push((a, b, e));
    }
    let weight = |p: &NcPoly| p.bidegree(r.gens()).map_or(0, |(_, w)| w);
    let w_max = parsed.iter().map(|(a, b, _)| weight(a) + weight(b)).max().unwrap_or(1);
    let m = build(r, 2, w_max, limits)?;
    let ctx = drep_core::traces::TraceContext::new(&m, dim)?;
    let q = m.quotient();
    let results: Vec<anyhow::Result<Outcome>> = g
        .checks
        .par_iter()
        .zip(parsed.par_iter())
        .map(|((label, value), (a, b, e))| {
            let (va, vb) = (q.project(a)?, q.project(b)?);
            let mut chain = CyclicChain::new(1);
            for (i, x) in &va {
                for (j, y) in &vb {
                    chain.add(&[*i, *j], x * y);
                }
            }
            let t1 = ctx.trace_chain(&chain)?;
            let expected = ctx.tr(e)?;
            let diff = &t1 - &expected;
            let ok = is_boundary(&ctx.rv, &diff, 0, limits)?.is_boundary();
            let actual = if ok {
                value.clone()
            } else {
                format!("{} (differs by a non-boundary)", ctx.rv.display_poly(&t1))
            };
            Ok(outcome(label, value, actual))
        })
        .collect();
    results.into_iter().collect()
}

/// `q=<q> w=<w> => dim_R dim_R_nat dim_Omega_nat exact|inexact`.
fn qper1_target(g: &Golden, f: &PresentationFile, limits: &Limits) -> anyhow::Result<Vec<Outcome>> {
    let r = nc_input(f)?;
    let mut keys = Vec::new();
    for (label, _) in &g.checks {
        let (qs, ws) = label.split_once(' ').ok_or_else(|| anyhow!("bad label `{label}`"))?;
        let q: u32 = qs.strip_prefix("q=").ok_or_else(|| anyhow!("bad label `{label}`"))?.parse()?;
        let w: u32 = ws.trim().strip_prefix("w=").ok_or_else(|| anyhow!("bad label `{label}`"))?.parse()?;
        keys.push((q, w));
    }
    let w_max = keys.iter().map(|k| k.1).max().unwrap_or(1);
    let rows = qper1_exactness(r, w_max, limits)?;
    let mut out = Vec::new();
    for ((label, value), (q, w)) in g.checks.iter().zip(keys) {
        let actual = match rows.iter().find(|row| row.homdeg == q && row.weight == w) {
            Some(row) => format!(
                "{} {} {} {}",
                row.dim_r,
                row.dim_natural,
                row.dim_omega,
                if row.is_exact() { "exact" } else { "inexact" }
            ),
            None => "empty".to_string(),
        };
        out.push(outcome(label, value, actual));
    }
    Ok(out)
}

/// `x = [[..]]; y = [[..]] => H_0 H_1 …` for the tangent complex at the
/// given point.
fn tangent_target(g: &Golden, f: &PresentationFile) -> anyhow::Result<Vec<Outcome>> {
    let a = f.algebra.as_ref().ok_or_else(|| anyhow!("input has no algebra"))?;
    let r = f.resolution.as_ref().ok_or_else(|| anyhow!("input has no resolution"))?;
    let mut out = Vec::new();
    for (label, value) in &g.checks {
        let rho = rep::parse_rep(&label.replace(';', "\n"), a)?;
        let expected = numbers(value)?;
        let t = tangent_complex(a, r, &rho, expected.len().saturating_sub(1) as u32)?;
        out.push(outcome(label, value, strings(&t.homology).join(" ")));
    }
    Ok(out)
}

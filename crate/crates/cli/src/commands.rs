use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use drep_core::ainfty::{build, QuotientAlgebra};
use drep_core::cyclic::{hc_dims, norm_check, FinDimAlgebra};
use drep_core::forms::{qper1_exactness, tangent_complex, x_complex_nc, x_complex_v, Qper1Row};
use drep_core::homology::{homology_cell, HomologyCell};
use drep_core::poly::WeightBehavior;
use drep_core::repfun::{matrix_reduce, representation_algebra};
use drep_core::traces::{chain_map_check, TraceContext};
use drep_core::{CommMonomial, DgPresentation, Limits, Monomial, Word};
use rayon::prelude::*;

use crate::dsl::{print, Dga, PresentationFile};
use crate::report::{strings, table};
use crate::{load, rep, verify, Command, Status};

pub fn dispatch(cmd: Command, limits: &Limits, out: &mut dyn Write) -> anyhow::Result<Status> {
    match cmd {
        Command::Check { file } => check(&load(&file)?, out),
        Command::Build { file, dim, nc } => build_cmd(&load(&file)?, dim, nc, out),
        Command::Homology {
            file,
            dim,
            nmax,
            wmax,
            slack,
            csv,
        } => homology(&load(&file)?, dim, nmax, wmax, slack, csv.as_deref(), limits, out),
        Command::Cyclic {
            file,
            nmax,
            wmax,
            reduced,
        } => cyclic(&load(&file)?, nmax, wmax, reduced, limits, out),
        Command::Trace {
            file,
            dim,
            nmax,
            wmax,
            values,
        } => trace(&load(&file)?, dim, nmax, wmax, values, limits, out),
        Command::Tangent {
            file,
            dim,
            rep,
            nmax,
        } => tangent(&load(&file)?, dim, &rep, nmax, out),
        Command::Periodicity { file, dim, wmax } => periodicity(&load(&file)?, dim, wmax, limits, out),
        Command::Verify { name } => verify::run(&name, limits, out),
    }
}

fn behavior_name(b: &WeightBehavior) -> &'static str {
    match b {
        WeightBehavior::Homogeneous => "homogeneous",
        WeightBehavior::Nondecreasing => "nondecreasing",
        WeightBehavior::Decreasing => "decreasing",
    }
}

fn describe_dg<M: Monomial>(label: &str, p: &DgPresentation<M>, out: &mut dyn Write) -> anyhow::Result<bool> {
    writeln!(out, "{label}: {} generators", p.gens().len())?;
    let rows: Vec<Vec<String>> = p
        .gens()
        .iter()
        .map(|g| strings([g.name.clone(), g.homdeg.to_string(), g.weight.to_string()]))
        .collect();
    write!(out, "{}", table(&strings(["gen", "deg", "wt"]), &rows))?;
    let report = p.check_d_squared();
    let failures: Vec<&str> = report.failures().collect();
    if failures.is_empty() {
        writeln!(out, "d^2 = 0: yes")?;
    } else {
        writeln!(out, "d^2 = 0: no (fails on {})", failures.join(", "))?;
    }
    writeln!(out, "weights: {}", behavior_name(&p.weight_behavior()))?;
    Ok(failures.is_empty())
}

fn check(f: &PresentationFile, out: &mut dyn Write) -> anyhow::Result<Status> {
    let mut ok = true;
    if let Some(a) = &f.algebra {
        writeln!(out, "algebra: {} generators, {} relations", a.gens.len(), a.relations.len())?;
    }
    if let Some(r) = &f.resolution {
        ok &= describe_dg("resolution", r, out)?;
    }
    match &f.dga {
        Some(Dga::Nc(p)) => ok &= describe_dg("dga nc", p, out)?,
        Some(Dga::Comm(p)) => ok &= describe_dg("dga comm", p, out)?,
        None => {}
    }
    if let Some(a) = &f.fdalgebra {
        writeln!(out, "fdalgebra: dimension {}, unit {}", a.dim(), a.names()[a.unit()])?;
    }
    if f == &PresentationFile::default() {
        bail!("the file has no sections");
    }
    writeln!(out, "{}", if ok { "check passed" } else { "check FAILED" })?;
    Ok(Status::from_bool(ok))
}

/// The noncommutative DG algebra a command works on: the resolution, or an
/// `nc` dga section.
pub fn nc_input(f: &PresentationFile) -> anyhow::Result<&DgPresentation<Word>> {
    match (&f.resolution, &f.dga) {
        (Some(r), _) => Ok(r),
        (None, Some(Dga::Nc(p))) => Ok(p),
        _ => bail!("this command needs a `resolution` or `dga nc` section"),
    }
}

fn build_cmd(f: &PresentationFile, dim: usize, nc: bool, out: &mut dyn Write) -> anyhow::Result<Status> {
    if dim == 0 {
        bail!("--dim must be positive");
    }
    let r = nc_input(f)?;
    let built = if nc {
        PresentationFile {
            dga: Some(Dga::Nc(matrix_reduce(r, dim)?)),
            ..Default::default()
        }
    } else {
        PresentationFile {
            dga: Some(Dga::Comm(representation_algebra(r, dim)?)),
            ..Default::default()
        }
    };
    let what = if nc { "matrix reduction" } else { "representation algebra" };
    writeln!(out, "# {what}, d = {dim}")?;
    write!(out, "{}", print(&built))?;
    Ok(Status::Ok)
}

/// Homology cells `(n, w)` for `n ≤ n_max`, `w ≤ w_max`, computed in
/// parallel and returned in row-major order.
pub fn homology_cells<M: Monomial + Send + Sync>(
    p: &DgPresentation<M>,
    n_max: u32,
    w_max: u32,
    slack: u32,
    limits: &Limits,
) -> anyhow::Result<Vec<((u32, u32), HomologyCell)>> {
    let keys: Vec<(u32, u32)> = (0..=n_max).flat_map(|n| (0..=w_max).map(move |w| (n, w))).collect();
    keys.par_iter()
        .map(|&(n, w)| Ok(((n, w), homology_cell(p, n, w, slack, limits)?)))
        .collect()
}

fn homology_report(
    title: &str,
    cells: &[((u32, u32), HomologyCell)],
    n_max: u32,
    w_max: u32,
    csv: Option<&Path>,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    writeln!(out, "{title}")?;
    let mut header = vec!["n\\w".to_string()];
    header.extend((0..=w_max).map(|w| w.to_string()));
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let mut row = vec![n.to_string()];
        for w in 0..=w_max {
            let c = &cells[(n * (w_max + 1) + w) as usize].1;
            row.push(if c.valid { c.dim.to_string() } else { format!("{}?", c.dim) });
        }
        rows.push(row);
    }
    write!(out, "{}", table(&header, &rows))?;
    let invalid: Vec<_> = cells.iter().filter(|(_, c)| !c.valid).collect();
    if !invalid.is_empty() {
        writeln!(out, "? marks cells that need more slack:")?;
        for ((n, w), c) in invalid {
            writeln!(
                out,
                "  n={n} w={w}: {}",
                c.reason.as_deref().unwrap_or("truncation not certified")
            )?;
        }
    }
    if let Some(path) = csv {
        let mut s = String::from("n,w,dim,valid,slack\n");
        for ((n, w), c) in cells {
            s.push_str(&format!("{n},{w},{},{},{}\n", c.dim, c.valid, c.slack));
        }
        std::fs::write(path, s).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn homology(
    f: &PresentationFile,
    dim: Option<usize>,
    n_max: u32,
    w_max: u32,
    slack: u32,
    csv: Option<&Path>,
    limits: &Limits,
    out: &mut dyn Write,
) -> anyhow::Result<Status> {
    match (dim, &f.dga) {
        (None, Some(Dga::Comm(p))) if f.resolution.is_none() => {
            let cells = homology_cells(p, n_max, w_max, slack, limits)?;
            homology_report("homology (rows n, columns weight)", &cells, n_max, w_max, csv, out)?;
        }
        (None, Some(Dga::Nc(p))) if f.resolution.is_none() => {
            let cells = homology_cells(p, n_max, w_max, slack, limits)?;
            homology_report("homology (rows n, columns weight)", &cells, n_max, w_max, csv, out)?;
        }
        (Some(d), _) => {
            if d == 0 {
                bail!("--dim must be positive");
            }
            let rv = representation_algebra(nc_input(f)?, d)?;
            let cells = homology_cells(&rv, n_max, w_max, slack, limits)?;
            let title = format!("representation homology, d = {d} (rows n, columns weight)");
            homology_report(&title, &cells, n_max, w_max, csv, out)?;
        }
        (None, _) => bail!("--dim is required for a resolution"),
    }
    Ok(Status::Ok)
}

fn hc_table(dims_by_weight: &[Vec<usize>], n_max: usize) -> String {
    let mut header = vec!["n\\w".to_string()];
    header.extend((0..dims_by_weight.len()).map(|w| w.to_string()));
    let rows: Vec<Vec<String>> = (0..=n_max)
        .map(|n| {
            let mut row = vec![n.to_string()];
            row.extend(dims_by_weight.iter().map(|d| d[n].to_string()));
            row
        })
        .collect();
    table(&header, &rows)
}

pub fn hc_weight_table(
    a: &FinDimAlgebra,
    n_max: usize,
    w_max: u32,
    reduced: bool,
    limits: &Limits,
) -> anyhow::Result<Vec<Vec<usize>>> {
    (0..=w_max)
        .into_par_iter()
        .map(|w| Ok(hc_dims(a, n_max, Some(w), reduced, limits)?))
        .collect()
}

fn cyclic(
    f: &PresentationFile,
    n_max: usize,
    w_max: Option<u32>,
    reduced: bool,
    limits: &Limits,
    out: &mut dyn Write,
) -> anyhow::Result<Status> {
    let label = if reduced { "reduced cyclic homology" } else { "cyclic homology" };
    if let Some(a) = &f.fdalgebra {
        match (w_max, a.weights()) {
            (Some(w), Some(_)) => {
                writeln!(out, "{label} by weight (rows n, columns weight)")?;
                write!(out, "{}", hc_table(&hc_weight_table(a, n_max, w, reduced, limits)?, n_max))?;
            }
            (Some(_), None) => bail!("--wmax needs basis weights"),
            (None, _) => {
                writeln!(out, "{label}")?;
                let dims = hc_dims(a, n_max, None, reduced, limits)?;
                let rows: Vec<Vec<String>> =
                    dims.iter().enumerate().map(|(n, d)| strings([n, *d])).collect();
                write!(out, "{}", table(&strings(["n", "dim"]), &rows))?;
            }
        }
        let checks = norm_check(a, n_max + 1, limits)?;
        writeln!(out, "norm map N_n: CC_(n-1) -> cyclic invariants of A^(x)n")?;
        let rows: Vec<Vec<String>> = checks
            .iter()
            .map(|c| {
                strings([
                    c.n.to_string(),
                    c.cc_dim.to_string(),
                    c.rank.to_string(),
                    c.invariant_dim.to_string(),
                    yes_no(c.injective),
                    yes_no(c.image_is_invariants),
                    yes_no(c.annihilated_by_one_minus_t),
                    yes_no(c.chain_map),
                ])
            })
            .collect();
        write!(
            out,
            "{}",
            table(
                &strings(["n", "cc", "rank", "inv", "injective", "image=inv", "(1-t)N=0", "chain"]),
                &rows
            )
        )?;
        return Ok(Status::from_bool(checks.iter().all(|c| c.passed())));
    }
    let r = nc_input(f)?;
    let w_max = w_max.ok_or_else(|| anyhow!("--wmax is required for a resolution"))?;
    let q = QuotientAlgebra::new(r.clone(), w_max, limits)?;
    writeln!(out, "{label} of H_0 by weight (rows n, columns weight)")?;
    let dims = hc_weight_table(q.algebra(), n_max, w_max, reduced, limits)?;
    write!(out, "{}", hc_table(&dims, n_max))?;
    Ok(Status::Ok)
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

#[allow(clippy::too_many_arguments)]
fn trace(
    f: &PresentationFile,
    dim: usize,
    n_max: usize,
    w_max: u32,
    values: bool,
    limits: &Limits,
    out: &mut dyn Write,
) -> anyhow::Result<Status> {
    if dim == 0 {
        bail!("--dim must be positive");
    }
    let r = nc_input(f)?;
    let m = build(r, n_max + 1, w_max, limits)?;
    let ctx = TraceContext::new(&m, dim)?;
    let report = chain_map_check(&ctx, n_max, w_max, limits)?;
    writeln!(out, "trace chain map d T_n = T_(n-1) b, d = {dim}")?;
    let rows: Vec<Vec<String>> = report
        .blocks
        .iter()
        .map(|b| strings([b.n.to_string(), b.weight.to_string(), b.chains.to_string(), b.residual_nnz.to_string()]))
        .collect();
    write!(out, "{}", table(&strings(["n", "w", "chains", "residual"]), &rows))?;
    if values {
        let names = m.algebra().names();
        writeln!(out, "values")?;
        for (word, v) in &report.values {
            let args: Vec<&str> = word.iter().map(|&i| names[i].as_str()).collect();
            writeln!(out, "T_{}({}) = {}", word.len() - 1, args.join(", "), ctx.rv.display_poly(v))?;
        }
    }
    let ok = report.passed();
    writeln!(out, "{}", if ok { "chain map: yes" } else { "chain map: NO" })?;
    Ok(Status::from_bool(ok))
}

fn tangent(f: &PresentationFile, dim: usize, rep_path: &Path, n_max: u32, out: &mut dyn Write) -> anyhow::Result<Status> {
    let a = f.algebra.as_ref().ok_or_else(|| anyhow!("tangent needs an `algebra` section"))?;
    let r = f.resolution.as_ref().ok_or_else(|| anyhow!("tangent needs a `resolution` section"))?;
    let text = std::fs::read_to_string(rep_path).with_context(|| format!("cannot read {}", rep_path.display()))?;
    let rho = rep::parse_rep(&text, a).map_err(|e| anyhow!("{}:{e}", rep_path.display()))?;
    if rho.dim != dim {
        bail!("the representation point has dimension {}, but --dim is {dim}", rho.dim);
    }
    let t = tangent_complex(a, r, &rho, n_max)?;
    writeln!(out, "tangent complex at the given point, d = {dim}")?;
    let rows: Vec<Vec<String>> = (0..t.homology.len())
        .map(|n| strings([n, t.chain_dims[n], t.ranks[n], t.homology[n]]))
        .collect();
    write!(out, "{}", table(&strings(["n", "chains", "rank d", "H_n"]), &rows))?;
    Ok(Status::Ok)
}

pub fn qper1_table(rows: &[Qper1Row]) -> String {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            strings([
                r.homdeg.to_string(),
                r.weight.to_string(),
                r.dim_r.to_string(),
                r.dim_natural.to_string(),
                r.dim_omega.to_string(),
                r.rank_beta.to_string(),
                r.rank_dbar.to_string(),
                yes_no(r.is_exact()),
            ])
        })
        .collect();
    table(
        &strings(["q", "w", "R", "R_nat", "Omega_nat", "rank beta", "rank dbar", "exact"]),
        &body,
    )
}

fn periodicity(f: &PresentationFile, dim: usize, w_max: u32, limits: &Limits, out: &mut dyn Write) -> anyhow::Result<Status> {
    let r = nc_input(f)?;
    let rows = qper1_exactness(r, w_max, limits)?;
    writeln!(out, "row exactness of 0 -> R_nat -> Omega^1_nat -> R -> R/[R,R] -> 0")?;
    write!(out, "{}", qper1_table(&rows))?;
    let mut ok = rows.iter().all(Qper1Row::is_exact);
    let q_max = r.max_homdeg() * w_max;
    let results: Vec<(u32, Vec<u32>, Vec<u32>)> = (1..=w_max)
        .into_par_iter()
        .map(|w| {
            let nc = x_complex_nc(r, w, q_max.min(w), 3, limits)?;
            let v = x_complex_v(r, dim, w, q_max.min(w), 3, limits)?;
            Ok((w, nc.d_squared_failures(), v.d_squared_failures()))
        })
        .collect::<anyhow::Result<_>>()?;
    writeln!(out, "total differential squares to zero, d = {dim}")?;
    let body: Vec<Vec<String>> = results
        .iter()
        .map(|(w, a, b)| {
            ok &= a.is_empty() && b.is_empty();
            strings([w.to_string(), yes_no(a.is_empty()), yes_no(b.is_empty())])
        })
        .collect();
    write!(out, "{}", table(&strings(["w", "X+(R)", "X+(R)_V"]), &body))?;
    Ok(Status::from_bool(ok))
}

/// `R_V` as a commutative dga, for callers that hold a resolution.
pub fn rv(f: &PresentationFile, dim: usize) -> anyhow::Result<DgPresentation<CommMonomial>> {
    Ok(representation_algebra(nc_input(f)?, dim)?)
}
